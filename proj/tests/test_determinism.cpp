#include <doctest.h>

#include <vector>

#include "arena/engine.hpp"
#include "arena/rng.hpp"

using namespace arena;

namespace {

SimConfig busy_cfg() {
    SimConfig cfg;
    cfg.map.size = 64;
    cfg.map.npc_count = 24;
    cfg.horizon = 120;
    cfg.fog_start_tick = 30;
    cfg.fog_shrink_interval = 2;
    return cfg;
}

// Deliberately sloppy random driver: it submits plenty of illegal orders so
// the masking paths get exercised alongside the legal ones.
MatchActions scripted_actions(const Sim& sim, Rng& rng) {
    MatchActions m{};
    for (int team = 0; team < kTeamCount; ++team) {
        const TeamObservation& obs = sim.obs(team);
        for (int k = 0; k < kTeamSize; ++k) {
            AgentAction& a = m[team][k];
            a.move = kCardinalDirections[rng.index(4)];
            if (!obs.visible.empty() && rng.chance(0.35)) {
                const VisibleEntity& v = obs.visible[rng.index(obs.visible.size())];
                a.attack = AttackCmd{v.entity_id,
                                     static_cast<AttackStyle>(rng.index(3))};
            }
            if (rng.chance(0.08)) a.comm = static_cast<int>(rng.uniform(0, 127));
            if (rng.chance(0.25)) {
                a.sell = SellCmd{0, rng.uniform(1, 4)};
            } else if (rng.chance(0.2)) {
                a.use_slot = 0;
            }
            if (!obs.market_window.empty() && rng.chance(0.3)) {
                a.buy_index = static_cast<int>(rng.index(obs.market_window.size()));
            }
        }
    }
    return m;
}

}  // namespace

TEST_SUITE("determinism") {

TEST_CASE("twin matches stay byte-identical under a chaotic driver") {
    Sim a(busy_cfg(), 2024);
    Sim b(busy_cfg(), 2024);
    Rng drive_a(555);
    Rng drive_b(555);

    REQUIRE(a.state_hash() == b.state_hash());
    while (!a.terminal()) {
        const MatchActions ma = scripted_actions(a, drive_a);
        const MatchActions mb = scripted_actions(b, drive_b);
        const auto ra = a.step(ma);
        const auto rb = b.step(mb);
        REQUIRE(ra == rb);
        for (std::size_t i = ra.first; i < ra.second; ++i) {
            REQUIRE(a.events()[i] == b.events()[i]);
        }
        if (a.world().tick % 16 == 0) {
            REQUIRE(a.state_hash() == b.state_hash());
            REQUIRE(a.check_invariants().empty());
        }
    }
    CHECK(b.terminal());
    CHECK(a.state_json() == b.state_json());
    CHECK(a.events() == b.events());
    CHECK(a.events().size() > 1000);  // the driver actually did things
}

TEST_CASE("a chaotic match conserves gold and keeps the books straight") {
    Sim sim(busy_cfg(), 77);
    Rng drive(901);
    while (!sim.terminal()) {
        sim.step(scripted_actions(sim, drive));
    }
    REQUIRE(sim.check_invariants().empty());

    // Gold is minted only by NPC deaths and never leaves the world: trades
    // move it, agent deaths keep it on the corpse's ledger.
    std::int64_t held = 0;
    for (const AgentState& a : sim.world().agents) held += a.gold;
    CHECK(held == sim.world().minted_gold);

    // Nobody acts after dying.
    std::vector<int> death_tick(kAgentCount + sim.world().npcs.size(), -1);
    for (const AgentState& a : sim.world().agents) {
        if (!a.alive) death_tick[a.agent_id] = a.death_tick;
    }
    for (const Event& e : sim.events()) {
        if (e.kind == EventKind::NpcDeath) death_tick[e.actor] = e.tick;
    }
    for (const Event& e : sim.events()) {
        if (e.kind == EventKind::Survive || e.kind == EventKind::Holding) continue;
        if (e.actor < 0) continue;
        const int died = death_tick[e.actor];
        if (died >= 0) CHECK(e.tick <= died);
    }

    // Every event sits inside its tick's range, in stamp order.
    int checked = 0;
    for (int t = 0; t < sim.world().tick; ++t) {
        const auto range = sim.tick_events(t);
        for (std::size_t i = range.first; i < range.second; ++i) {
            CHECK(sim.events()[i].tick == t);
            ++checked;
        }
    }
    CHECK(checked == static_cast<int>(sim.events().size()));
}

}  // TEST_SUITE
