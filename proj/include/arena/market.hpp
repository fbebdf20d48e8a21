#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "arena/config.hpp"
#include "arena/items.hpp"

namespace arena {

struct Listing {
    std::int64_t listing_id = 0;
    int seller = -1;
    ItemStack item;  // always quantity 1
    std::int64_t price = 0;

    friend bool operator==(const Listing&, const Listing&) = default;
};

// The global order book: a flat collection in listing-id order. All
// mutation happens inside the match executor's resolution phases.
class Market {
  public:
    std::int64_t list(int seller, ItemKind kind, int level, std::int64_t price) {
        Listing l;
        l.listing_id = next_id_++;
        l.seller = seller;
        l.item = {kind, level, 1};
        l.price = price;
        listings_.push_back(l);
        return l.listing_id;
    }

    const Listing* find(std::int64_t listing_id) const {
        for (const Listing& l : listings_) {
            if (l.listing_id == listing_id) return &l;
        }
        return nullptr;
    }

    bool erase(std::int64_t listing_id) {
        for (std::size_t i = 0; i < listings_.size(); ++i) {
            if (listings_[i].listing_id == listing_id) {
                listings_.erase(listings_.begin() + i);
                return true;
            }
        }
        return false;
    }

    // Removes every listing of a seller, returning the removed rows.
    std::vector<Listing> delist_seller(int seller) {
        std::vector<Listing> removed;
        for (std::size_t i = 0; i < listings_.size();) {
            if (listings_[i].seller == seller) {
                removed.push_back(listings_[i]);
                listings_.erase(listings_.begin() + i);
            } else {
                ++i;
            }
        }
        return removed;
    }

    // The observable window: up to kMarketWindowSize listing ids ordered by
    // price ascending, then listing id ascending.
    std::vector<std::int64_t> window() const;

    const std::vector<Listing>& listings() const { return listings_; }
    std::int64_t next_id() const { return next_id_; }

    friend bool operator==(const Market&, const Market&) = default;

  private:
    std::vector<Listing> listings_;
    std::int64_t next_id_ = 0;
};

}  // namespace arena
