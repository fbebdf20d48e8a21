#include <doctest.h>

#include "arena/engine.hpp"
#include "arena/rng.hpp"

using namespace arena;

TEST_SUITE("fog") {

TEST_CASE("shrink schedule hits the stated landmarks") {
    SimConfig cfg;  // start 240, one tile per 16 ticks
    CHECK(Sim::fog_inset_at(0, cfg) == 0);
    CHECK(Sim::fog_inset_at(239, cfg) == 0);
    CHECK(Sim::fog_rect(239, 128, cfg) == Rect{0, 0, 127, 127});
    CHECK(Sim::fog_inset_at(240, cfg) == 1);
    CHECK(Sim::fog_inset_at(255, cfg) == 1);
    CHECK(Sim::fog_inset_at(256, cfg) == 2);
    CHECK(Sim::fog_inset_at(271, cfg) == 2);
    CHECK(Sim::fog_inset_at(1248, cfg) == 64);
    // Fully closed: the 2x2 center block survives any further shrinking.
    CHECK(Sim::fog_rect(1248, 128, cfg) == Rect{63, 63, 64, 64});
    CHECK(Sim::fog_rect(100000, 128, cfg) == Rect{63, 63, 64, 64});
    // Odd-sized maps floor at the single center tile.
    CHECK(Sim::rect_from_inset(1000, 33) == Rect{16, 16, 16, 16});
}

TEST_CASE("safe rectangles only ever shrink") {
    SimConfig cfg;
    Rect prev = Sim::fog_rect(0, 128, cfg);
    for (int t = 1; t <= 1400; ++t) {
        const Rect cur = Sim::fog_rect(t, 128, cfg);
        CHECK(prev.contains(cur));
        prev = cur;
    }
}

TEST_CASE("damage is the chebyshev distance to the rectangle") {
    SimConfig cfg;
    const Rect safe{10, 10, 20, 20};
    CHECK(Sim::fog_damage_at({15, 15}, safe, cfg) == 0);
    CHECK(Sim::fog_damage_at({10, 10}, safe, cfg) == 0);  // edge is inside
    CHECK(Sim::fog_damage_at({7, 15}, safe, cfg) == 3);
    CHECK(Sim::fog_damage_at({7, 4}, safe, cfg) == 6);
    SimConfig doubled = cfg;
    doubled.fog_damage_per_tile = 2;
    CHECK(Sim::fog_damage_at({7, 15}, safe, doubled) == 6);
}

TEST_CASE("closed form matches a brute-force scan of random points") {
    SimConfig cfg;
    Rng rng(0xf09);
    for (int i = 0; i < 2000; ++i) {
        const int tick = static_cast<int>(rng.uniform(0, 1500));
        const int size = 128;
        const Coord p{static_cast<int>(rng.uniform(0, size - 1)),
                      static_cast<int>(rng.uniform(0, size - 1))};
        const int shrink =
            tick < 240 ? 0 : (tick - 240) / 16 + 1;  // restated independently
        const int lo = std::min(shrink, (size - 1) / 2);
        const int hi = std::max(size - 1 - shrink, size / 2);
        const Rect expect{lo, lo, hi, hi};
        CHECK(Sim::fog_rect(tick, size, cfg) == expect);
        const int dr = std::max({expect.lo_r - p.r, p.r - expect.hi_r, 0});
        const int dc = std::max({expect.lo_c - p.c, p.c - expect.hi_c, 0});
        CHECK(Sim::fog_damage_at(p, expect, cfg) == std::max(dr, dc));
    }
}

TEST_CASE("the ring burns laggards, regen first, and kills without credit") {
    SimConfig cfg;
    cfg.map.size = 64;
    cfg.map.npc_count = 0;
    cfg.horizon = 400;
    cfg.fog_start_tick = 4;
    cfg.fog_shrink_interval = 1;
    Sim sim(cfg, 211);

    int id = -1;  // someone standing right at the border ring
    for (const AgentState& a : sim.world().agents) {
        if (sim.world().map.border_distance(a.pos) == 1) {
            id = a.agent_id;
            break;
        }
    }
    REQUIRE(id >= 0);

    for (int i = 0; i < 5; ++i) sim.step({});  // ticks 0..4, inset reaches 1
    CHECK(sim.world().agents[id].hp == 100);   // border ring still safe
    sim.step({});  // tick 5: inset 2, distance 1
    CHECK(sim.world().agents[id].hp == 99);
    sim.step({});  // tick 6: inset 3 — regen heals 1, fog takes 2
    CHECK(sim.world().agents[id].hp == 98);

    int shrinks = 0;
    while (!sim.terminal()) {
        const auto range = sim.step({});
        for (std::size_t i = range.first; i < range.second; ++i) {
            if (sim.events()[i].kind == EventKind::FogShrink) ++shrinks;
        }
    }
    CHECK(shrinks > 0);
    // The ring can leave one team standing alone at the end; everyone else
    // must have burned, uncredited.
    int fog_deaths = 0;
    int survivors = 0;
    for (const Event& e : sim.events()) {
        if (e.kind == EventKind::Death) {
            CHECK(e.aux == static_cast<int>(DeathCause::Fog));
            CHECK(e.target == -1);
            ++fog_deaths;
        } else if (e.kind == EventKind::Survive) {
            ++survivors;
        }
    }
    CHECK(fog_deaths + survivors == kAgentCount);
    CHECK(fog_deaths >= kAgentCount - kTeamSize);
    for (std::int64_t credit : sim.world().defeat_credits) CHECK(credit == 0);
    CHECK(sim.alive_team_count() <= 1);
    CHECK(sim.world().fog_inset > 0);
}

}  // TEST_SUITE
