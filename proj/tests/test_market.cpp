#include <doctest.h>

#include "arena/market.hpp"

using namespace arena;

TEST_SUITE("market") {

TEST_CASE("listing ids are strictly increasing") {
    Market m;
    const auto a = m.list(0, ItemKind::Hat, 3, 7);
    const auto b = m.list(1, ItemKind::Sword, 1, 2);
    const auto c = m.list(0, ItemKind::Hat, 3, 7);
    CHECK(a < b);
    CHECK(b < c);
    CHECK(m.listings().size() == 3);
}

TEST_CASE("find and erase address listings by id") {
    Market m;
    const auto id = m.list(4, ItemKind::Ration, 2, 5);
    const Listing* l = m.find(id);
    REQUIRE(l != nullptr);
    CHECK(l->seller == 4);
    CHECK(l->item.kind == ItemKind::Ration);
    CHECK(l->item.quantity == 1);
    CHECK(l->price == 5);
    CHECK(m.erase(id));
    CHECK(m.find(id) == nullptr);
    CHECK(!m.erase(id));
}

TEST_CASE("window orders by price then listing id") {
    Market m;
    const auto a = m.list(0, ItemKind::Sword, 1, 9);
    const auto b = m.list(1, ItemKind::Sword, 1, 3);
    const auto c = m.list(2, ItemKind::Sword, 1, 9);
    const auto d = m.list(3, ItemKind::Sword, 1, 1);
    const auto w = m.window();
    REQUIRE(w.size() == 4);
    CHECK(w[0] == d);
    CHECK(w[1] == b);
    CHECK(w[2] == a);  // price tie: earlier listing first
    CHECK(w[3] == c);
}

TEST_CASE("window truncates to the 170 cheapest") {
    Market m;
    for (int i = 0; i < 200; ++i) {
        m.list(i % kAgentCount, ItemKind::Scrap, 1, 200 - i);
    }
    const auto w = m.window();
    REQUIRE(static_cast<int>(w.size()) == kMarketWindowSize);
    std::int64_t prev = 0;
    for (auto id : w) {
        const Listing* l = m.find(id);
        REQUIRE(l != nullptr);
        CHECK(l->price >= prev);
        prev = l->price;
    }
    // The 30 most expensive listings fell off the window.
    CHECK(m.find(w.back())->price == 170);
}

TEST_CASE("delist_seller removes exactly that seller's rows") {
    Market m;
    m.list(7, ItemKind::Hat, 1, 2);
    m.list(8, ItemKind::Top, 1, 2);
    m.list(7, ItemKind::Bottom, 4, 9);
    const auto removed = m.delist_seller(7);
    CHECK(removed.size() == 2);
    CHECK(m.listings().size() == 1);
    CHECK(m.listings()[0].seller == 8);
    CHECK(m.delist_seller(7).empty());
}

}  // TEST_SUITE
