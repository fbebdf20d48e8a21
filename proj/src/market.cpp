#include "arena/market.hpp"

#include <algorithm>

namespace arena {

std::vector<std::int64_t> Market::window() const {
    std::vector<const Listing*> rows;
    rows.reserve(listings_.size());
    for (const Listing& l : listings_) rows.push_back(&l);
    std::sort(rows.begin(), rows.end(), [](const Listing* a, const Listing* b) {
        if (a->price != b->price) return a->price < b->price;
        return a->listing_id < b->listing_id;
    });
    if (rows.size() > static_cast<std::size_t>(kMarketWindowSize)) {
        rows.resize(kMarketWindowSize);
    }
    std::vector<std::int64_t> ids;
    ids.reserve(rows.size());
    for (const Listing* l : rows) ids.push_back(l->listing_id);
    return ids;
}

}  // namespace arena
