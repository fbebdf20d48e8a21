#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "arena/engine.hpp"
#include "arena/policies.hpp"
#include "arena/replay.hpp"
#include "arena/rng.hpp"
#include "arena/stats.hpp"

using namespace arena;

namespace {

Replay played_replay(std::uint64_t seed) {
    SimConfig cfg;
    cfg.map.size = 64;
    cfg.map.npc_count = 24;
    cfg.horizon = 200;
    static const std::vector<std::string> specs = {"mixture", "reckless", "coward", "ruthless"};
    Sim sim(cfg, seed);
    std::vector<std::unique_ptr<TeamPolicy>> pols;
    std::array<std::string, kTeamCount> names;
    for (int t = 0; t < kTeamCount; ++t) {
        pols.push_back(make_policy(specs[t % specs.size()]));
        pols.back()->set_config(cfg);
        names[t] = pols.back()->name();
    }
    while (!sim.terminal()) {
        MatchActions actions{};
        const int tick = sim.world().tick;
        for (int t = 0; t < kTeamCount; ++t) {
            actions[t] = pols[t]->act(sim.obs(t), derive_seed(derive_seed(seed, 100 + t), tick));
        }
        sim.step(actions);
    }
    return make_replay(sim, seed, names);
}

const std::vector<Replay>& sample_replays() {
    static const std::vector<Replay> rs = [] {
        std::vector<Replay> v;
        v.push_back(played_replay(31));
        v.push_back(played_replay(32));
        return v;
    }();
    return rs;
}

Replay synthetic(std::vector<ReplayTick> ticks) {
    Replay r;
    r.header.policies.fill("stay");
    r.header.horizon = r.header.cfg.horizon;
    r.ticks = std::move(ticks);
    return r;
}

Event list_event(ItemKind kind, int level, std::int64_t price, int seller) {
    return {.kind = EventKind::List, .actor = seller, .value = price, .item = kind,
            .item_level = level, .quantity = 1};
}

bool same_report(const StatsReport& a, const StatsReport& b) {
    if (a.matches != b.matches) return false;
    if (a.item_distribution != b.item_distribution) return false;
    if (a.item_quantity != b.item_quantity) return false;
    if (a.buys != b.buys || a.lists != b.lists) return false;
    if (a.price_grid.size() != b.price_grid.size()) return false;
    for (const auto& [key, cell] : a.price_grid) {
        const auto it = b.price_grid.find(key);
        if (it == b.price_grid.end() || it->second.quantity != cell.quantity ||
            it->second.price_total != cell.price_total) {
            return false;
        }
    }
    for (int t = 0; t < kTeamCount; ++t) {
        const TeamRadar& x = a.team_radar[t];
        const TeamRadar& y = b.team_radar[t];
        if (x.defeat_credits != y.defeat_credits || x.survival_ticks != y.survival_ticks ||
            x.damage_dealt != y.damage_dealt || x.damage_taken != y.damage_taken ||
            x.gold_earned != y.gold_earned || x.equipment_score != y.equipment_score) {
            return false;
        }
    }
    return true;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("three sword listings and one buy produce the textbook report") {
    ReplayTick t0;
    t0.tick = 0;
    t0.events = {list_event(ItemKind::Sword, 2, 5, 8), list_event(ItemKind::Sword, 2, 5, 9),
                 list_event(ItemKind::Sword, 2, 5, 10)};
    Event buy{.kind = EventKind::Buy, .actor = 1, .target = 8, .value = 5,
              .item = ItemKind::Sword, .item_level = 2, .quantity = 1};
    ReplayTick t1;
    t1.tick = 1;
    t1.events = {buy};
    const StatsReport r = compute_stats({synthetic({t0, t1})});

    const int weapon = static_cast<int>(ItemCategory::Weapon);
    CHECK(r.buys[weapon] == 1);
    CHECK(r.lists[weapon] == 3);
    CHECK(r.buy_sell_ratio(ItemCategory::Weapon) == doctest::Approx(1.0 / 3.0));
    CHECK(r.buy_sell_ratio(ItemCategory::Armor) == -1.0);

    const auto cell = r.price_grid.find({static_cast<int>(ItemKind::Sword), 2});
    REQUIRE(cell != r.price_grid.end());
    CHECK(cell->second.quantity == 3);
    CHECK(cell->second.mean_price() == doctest::Approx(5.0));
    CHECK(r.price_grid.size() == 1);

    // The sale pays seller 8's team; listings alone move no gold.
    CHECK(r.team_radar[1].gold_earned == 5);
    CHECK(r.team_radar[0].gold_earned == 0);
}

TEST_CASE("creation events feed the item tallies") {
    ReplayTick t0;
    t0.tick = 0;
    t0.events = {
        // Forest/water harvests carry no item and must not count.
        {.kind = EventKind::Harvest, .actor = 0, .value = 1},
        {.kind = EventKind::Harvest, .actor = 0, .item = ItemKind::Shaving, .item_level = 1,
         .quantity = 1},
        {.kind = EventKind::Harvest, .actor = 3, .item = ItemKind::Poultice, .item_level = 2,
         .quantity = 1},
        {.kind = EventKind::Loot, .actor = 5, .target = 130, .value = 4, .item = ItemKind::Sword,
         .item_level = 3, .quantity = 1},
    };
    const StatsReport r = compute_stats({synthetic({t0})});

    CHECK(r.item_quantity[static_cast<int>(ItemKind::Shaving)] == 1);
    CHECK(r.item_quantity[static_cast<int>(ItemKind::Poultice)] == 1);
    CHECK(r.item_quantity[static_cast<int>(ItemKind::Sword)] == 1);
    CHECK(r.item_distribution[static_cast<int>(ItemCategory::Ammunition)] == 1);
    CHECK(r.item_distribution[static_cast<int>(ItemCategory::Consumable)] == 1);
    CHECK(r.item_distribution[static_cast<int>(ItemCategory::Weapon)] == 1);
    CHECK(r.item_distribution[static_cast<int>(ItemCategory::Tool)] == 0);
    CHECK(r.team_radar[0].gold_earned == 4);  // agent 5's loot gold lands on team 0
}

TEST_CASE("radar axes are computed from the event stream") {
    const int slain = static_cast<int>(DeathCause::Slain);
    ReplayTick t;
    t.tick = 30;
    t.events = {
        {.kind = EventKind::Attack, .actor = 0, .target = 130, .value = 7,
         .style = AttackStyle::Range},
        {.kind = EventKind::Attack, .actor = 130, .target = 9, .value = 5},
        {.kind = EventKind::Attack, .actor = 9, .target = 0, .value = 3},
        {.kind = EventKind::Death, .actor = 9, .target = 0, .value = 2, .quantity = 11,
         .aux = slain},
        {.kind = EventKind::Death, .actor = 20, .target = 131, .value = 0, .quantity = 8,
         .aux = static_cast<int>(DeathCause::NpcSlain)},
        {.kind = EventKind::Holding, .actor = 17, .item = ItemKind::Hat, .item_level = 3,
         .quantity = 1, .aux = 1},
        {.kind = EventKind::Holding, .actor = 17, .item = ItemKind::Ration, .item_level = 9,
         .quantity = 2, .aux = 0},
        {.kind = EventKind::Survive, .actor = 0, .value = 2, .aux = 12},
    };
    const Replay replay = synthetic({t});
    const StatsReport r = compute_stats({replay});

    CHECK(r.team_radar[0].damage_dealt == 7);   // npc victims still count as dealt
    CHECK(r.team_radar[1].damage_dealt == 3);
    CHECK(r.team_radar[0].damage_taken == 3);
    CHECK(r.team_radar[1].damage_taken == 5);   // npc attacker, agent victim
    CHECK(r.team_radar[0].defeat_credits == 1); // killer id 0
    CHECK(r.team_radar[2].defeat_credits == 0); // npc kills credit nobody
    CHECK(r.team_radar[2].equipment_score == 3);  // worn hat counts, carried ration not

    // survival_ticks follow the outcome rule: survivor team gets horizon+1.
    const int horizon = replay.header.cfg.horizon;
    CHECK(r.team_radar[0].survival_ticks == horizon + 1);
    CHECK(r.team_radar[1].survival_ticks == 30);
    CHECK(r.team_radar[2].survival_ticks == 30);
    CHECK(r.team_radar[3].survival_ticks == 0);
}

TEST_CASE("no trades means empty grid and sentinel ratios") {
    const StatsReport r = compute_stats({synthetic({ReplayTick{0, {}}})});
    CHECK(r.matches == 1);
    CHECK(r.price_grid.empty());
    for (int c = 0; c < kItemCategoryCount; ++c) {
        CHECK(r.buy_sell_ratio(static_cast<ItemCategory>(c)) == -1.0);
        CHECK(r.item_distribution[c] == 0);
    }
}

TEST_CASE("compute_stats rejects an empty collection") {
    CHECK_THROWS_AS(compute_stats({}), std::invalid_argument);
}

TEST_CASE("aggregation is order-insensitive and merge matches the fold") {
    const std::vector<Replay>& rs = sample_replays();
    const StatsReport forward = compute_stats({rs[0], rs[1]});
    const StatsReport backward = compute_stats({rs[1], rs[0]});
    CHECK(same_report(forward, backward));

    StatsReport merged = stats_of_replay(rs[0]);
    merged.merge(stats_of_replay(rs[1]));
    CHECK(same_report(forward, merged));
    CHECK(merged.matches == 2);
}

TEST_CASE("real matches produce a live market and sane grid levels") {
    const StatsReport r = compute_stats(sample_replays());
    std::int64_t total_lists = 0;
    for (int c = 0; c < kItemCategoryCount; ++c) total_lists += r.lists[c];
    CHECK(total_lists > 0);
    CHECK_FALSE(r.price_grid.empty());
    for (const auto& [key, cell] : r.price_grid) {
        CHECK(key.second >= 1);
        CHECK(key.second <= 10);
        CHECK(cell.quantity > 0);
        CHECK(cell.price_total >= cell.quantity);  // floor price is 1
    }
    std::int64_t survival = 0;
    for (int t = 0; t < kTeamCount; ++t) {
        survival += r.team_radar[t].survival_ticks;
        CHECK(r.team_radar[t].damage_taken >= 0);
    }
    CHECK(survival > 0);
}

TEST_CASE("csv emission is pinned and byte-stable") {
    namespace fs = std::filesystem;
    ReplayTick t0;
    t0.tick = 0;
    t0.events = {list_event(ItemKind::Sword, 2, 5, 8), list_event(ItemKind::Sword, 2, 5, 9),
                 list_event(ItemKind::Sword, 2, 5, 10),
                 Event{.kind = EventKind::Buy, .actor = 1, .target = 8, .value = 5,
                       .item = ItemKind::Sword, .item_level = 2, .quantity = 1}};
    const StatsReport r = compute_stats({synthetic({t0})});

    const fs::path dir = fs::temp_directory_path() / "arena_stats_csv";
    fs::remove_all(dir);
    emit_csv(r, dir.string());

    CHECK(slurp(dir / "price_grid.csv") == "kind,level,quantity,mean_price\n"
                                           "sword,2,3,5.0000\n");
    CHECK(slurp(dir / "buy_sell_ratio.csv") == "category,buys,lists,ratio\n"
                                               "ammunition,0,0,-1\n"
                                               "weapon,1,3,0.3333\n"
                                               "armor,0,0,-1\n"
                                               "consumable,0,0,-1\n"
                                               "tool,0,0,-1\n");
    const std::string radar = slurp(dir / "team_radar.csv");
    CHECK(radar.substr(0, radar.find('\n')) ==
          "team,defeat_credits,survival_ticks,damage_dealt,damage_taken,gold_earned,"
          "equipment_score");
    CHECK(slurp(dir / "item_distribution.csv").find("weapon,0\n") != std::string::npos);
    CHECK(slurp(dir / "item_quantity.csv").find("sword,0\n") != std::string::npos);

    // Re-emission over the same report is byte-identical.
    const std::string first = slurp(dir / "price_grid.csv") + slurp(dir / "team_radar.csv");
    emit_csv(r, dir.string());
    CHECK(slurp(dir / "price_grid.csv") + slurp(dir / "team_radar.csv") == first);
    fs::remove_all(dir);
}

TEST_CASE("an empty report emits headers only") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "arena_stats_empty";
    fs::remove_all(dir);
    emit_csv(StatsReport{}, dir.string());
    CHECK(slurp(dir / "item_distribution.csv") == "category,count\n");
    CHECK(slurp(dir / "item_quantity.csv") == "kind,count\n");
    CHECK(slurp(dir / "buy_sell_ratio.csv") == "category,buys,lists,ratio\n");
    CHECK(slurp(dir / "price_grid.csv") == "kind,level,quantity,mean_price\n");
    CHECK(slurp(dir / "team_radar.csv") ==
          "team,defeat_credits,survival_ticks,damage_dealt,damage_taken,gold_earned,"
          "equipment_score\n");
    fs::remove_all(dir);
}

TEST_CASE("price-by-level helper aggregates kinds within the category") {
    StatsReport r;
    r.matches = 1;
    r.price_grid[{static_cast<int>(ItemKind::Sword), 1}] = {2, 4};   // mean 2
    r.price_grid[{static_cast<int>(ItemKind::Bow), 1}] = {2, 8};    // pooled level-1 mean 3
    r.price_grid[{static_cast<int>(ItemKind::Wand), 4}] = {1, 9};   // mean 9
    r.price_grid[{static_cast<int>(ItemKind::Ration), 2}] = {5, 5}; // other category
    const auto curve = category_price_by_level(r, ItemCategory::Weapon);
    REQUIRE(curve.size() == 2);
    CHECK(curve[0].first == 1);
    CHECK(curve[0].second == doctest::Approx(3.0));
    CHECK(curve[1].first == 4);
    CHECK(curve[1].second == doctest::Approx(9.0));
}

TEST_CASE("spearman correlation behaves at the edges") {
    CHECK(spearman_rho({1, 2, 3, 4}, {2, 4, 6, 8}) == doctest::Approx(1.0));
    CHECK(spearman_rho({1, 2, 3, 4}, {9, 7, 5, 1}) == doctest::Approx(-1.0));
    CHECK(spearman_rho({1, 2, 3}, {5, 5, 5}) == doctest::Approx(0.0));
    CHECK(spearman_rho({1, 2, 3, 4}, {1, 1, 3, 3}) > 0.8);
    CHECK(spearman_rho({1}, {1}) == 0.0);
}

}  // TEST_SUITE
