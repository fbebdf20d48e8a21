#include <doctest.h>

#include "arena/combat.hpp"
#include "arena/engine.hpp"

using namespace arena;

namespace {

SimConfig npc_cfg() {
    SimConfig cfg;
    cfg.map.size = 64;
    cfg.map.npc_count = 3;
    cfg.horizon = 400;
    cfg.fog_start_tick = 1 << 20;
    return cfg;
}

AgentAction& act(MatchActions& m, int id) { return m[id / kTeamSize][id % kTeamSize]; }

void teleport(Sim& sim, int entity_id, Coord to) {
    WorldState& w = sim.world_mut();
    const int size = w.map.size();
    REQUIRE(w.map.passable(to));
    REQUIRE(w.occupancy[to.r * size + to.c] == -1);
    Coord& pos = entity_id < kAgentCount ? w.agents[entity_id].pos
                                         : w.npcs[entity_id - kAgentCount].pos;
    w.occupancy[pos.r * size + pos.c] = -1;
    w.occupancy[to.r * size + to.c] = entity_id;
    pos = to;
}

void remove_npc(Sim& sim, int idx) {
    WorldState& w = sim.world_mut();
    NpcState& n = w.npcs[idx];
    if (!n.alive) return;
    w.occupancy[n.pos.r * w.map.size() + n.pos.c] = -1;
    n.alive = false;
    n.hp = 0;
}

std::vector<Coord> isolated_run(const Sim& sim, int n) {
    const GameMap& map = sim.world().map;
    for (int r = 14; r < map.size() - 14; ++r) {
        for (int c = 14; c + n <= map.size() - 14; ++c) {
            bool ok = true;
            for (int i = 0; ok && i < n; ++i) {
                const Coord p{r, c + i};
                ok = map.passable(p) && !terrain_harvestable(map.kind(p)) &&
                     sim.world().occupancy[p.r * map.size() + p.c] == -1;
                for (Direction d : kCardinalDirections) {
                    const Coord q = step(p, d);
                    if (map.in_bounds(q) && (map.kind(q) == TerrainKind::Water ||
                                             map.kind(q) == TerrainKind::Fish)) {
                        ok = false;
                    }
                }
            }
            for (const AgentState& a : sim.world().agents) {
                if (!ok) break;
                if (a.alive && chebyshev(a.pos, {r, c}) < 10) ok = false;
            }
            for (const NpcState& np : sim.world().npcs) {
                if (!ok) break;
                if (np.alive && chebyshev(np.pos, {r, c}) < 10) ok = false;
            }
            if (ok) {
                std::vector<Coord> out;
                for (int i = 0; i < n; ++i) out.push_back({r, c + i});
                return out;
            }
        }
    }
    REQUIRE(false);
    return {};
}

std::vector<Event> grab(const Sim& sim, std::pair<std::size_t, std::size_t> range,
                        EventKind kind) {
    std::vector<Event> out;
    for (std::size_t i = range.first; i < range.second; ++i) {
        if (sim.events()[i].kind == kind) out.push_back(sim.events()[i]);
    }
    return out;
}

// One live NPC of the given shape, parked on `pos`.
void stage_single_npc(Sim& sim, NpcType type, int level, Coord pos) {
    remove_npc(sim, 1);
    remove_npc(sim, 2);
    NpcState& n = sim.world_mut().npcs[0];
    n.type = type;
    n.level = level;
    n.hp = n.max_hp(sim.cfg());
    teleport(sim, n.npc_id, pos);
}

}  // namespace

TEST_SUITE("npc") {

TEST_CASE("hostile npcs chase and strike the nearest agent") {
    Sim sim(npc_cfg(), 151);
    const auto run = isolated_run(sim, 5);
    stage_single_npc(sim, NpcType::Hostile, 3, run[0]);
    teleport(sim, 0, run[3]);
    sim.world_mut().agents[0].food_half = 90;
    sim.world_mut().agents[0].water_half = 90;

    // Level 3, mage against a melee main: round(1.5 * 16) = 24 per hit.
    auto range = sim.step({});
    auto attacks = grab(sim, range, EventKind::Attack);
    REQUIRE(attacks.size() == 1);
    CHECK(attacks[0].actor == 128);
    CHECK(attacks[0].target == 0);
    CHECK(attacks[0].value == 24);
    CHECK(attacks[0].style == AttackStyle::Mage);
    CHECK(sim.world().agents[0].hp == 76);
    CHECK(sim.world().npcs[0].pos == run[1]);  // closed one tile of distance

    sim.step({});
    CHECK(sim.world().agents[0].hp == 52);
    CHECK(sim.world().npcs[0].pos == run[2]);  // adjacent now: stops advancing
    sim.step({});
    CHECK(sim.world().agents[0].hp == 28);
    CHECK(sim.world().npcs[0].pos == run[2]);
    sim.step({});
    CHECK(sim.world().agents[0].hp == 4);
    range = sim.step({});
    REQUIRE(!sim.world().agents[0].alive);
    CHECK(sim.world().agents[0].death_cause == DeathCause::NpcSlain);
    CHECK(sim.world().agents[0].killer == 128);
    const auto deaths = grab(sim, range, EventKind::Death);
    REQUIRE(deaths.size() == 1);
    CHECK(deaths[0].aux == static_cast<int>(DeathCause::NpcSlain));
    for (std::int64_t credit : sim.world().defeat_credits) CHECK(credit == 0);
}

TEST_CASE("passive npcs flee and never swing") {
    Sim sim(npc_cfg(), 157);
    const auto run = isolated_run(sim, 5);
    stage_single_npc(sim, NpcType::Passive, 6, run[1]);
    teleport(sim, 0, run[0]);

    sim.step({});
    CHECK(sim.world().npcs[0].pos == run[2]);
    sim.step({});
    CHECK(sim.world().npcs[0].pos == run[3]);
    for (const Event& e : sim.events()) CHECK(e.kind != EventKind::Attack);
    CHECK(sim.world().agents[0].hp == 100);
}

TEST_CASE("neutral npcs retaliate against their attacker only") {
    Sim sim(npc_cfg(), 163);
    const auto run = isolated_run(sim, 3);
    stage_single_npc(sim, NpcType::Neutral, 2, run[1]);
    teleport(sim, 0, run[0]);
    teleport(sim, 8, run[2]);
    WorldState& w = sim.world_mut();
    w.agents[0].food_half = w.agents[0].water_half = 90;
    w.agents[8].food_half = w.agents[8].water_half = 90;

    auto range = sim.step({});
    CHECK(grab(sim, range, EventKind::Attack).empty());  // unprovoked: idle
    CHECK(sim.world().npcs[0].pos == run[1]);

    MatchActions m{};
    act(m, 0).attack = AttackCmd{128, AttackStyle::Melee};
    range = sim.step(m);
    auto attacks = grab(sim, range, EventKind::Attack);
    REQUIRE(attacks.size() == 2);  // the provocation, then the reprisal
    CHECK(attacks[0].actor == 0);
    CHECK(attacks[0].value == 12);  // melee into a melee-main npc: no dominance
    CHECK(attacks[1].actor == 128);
    CHECK(attacks[1].target == 0);
    CHECK(attacks[1].value == 21);  // level 2 mage against melee main
    CHECK(sim.world().npcs[0].hp == 40 - 12);
    CHECK(sim.world().npcs[0].last_hitter == 0);

    range = sim.step({});
    attacks = grab(sim, range, EventKind::Attack);
    REQUIRE(attacks.size() == 1);  // keeps pressing its grudge
    CHECK(attacks[0].target == 0);
    CHECK(sim.world().agents[0].hp == 100 - 21 - 21);
    CHECK(sim.world().agents[8].hp == 100);  // the bystander is never touched
}

TEST_CASE("a slain npc pays gold and one leveled item to the last hitter") {
    Sim sim(npc_cfg(), 167);
    const auto run = isolated_run(sim, 2);
    stage_single_npc(sim, NpcType::Passive, 4, run[1]);
    sim.world_mut().npcs[0].hp = 1;
    teleport(sim, 0, run[0]);

    MatchActions m{};
    act(m, 0).attack = AttackCmd{128, AttackStyle::Melee};
    auto range = sim.step(m);

    REQUIRE(!sim.world().npcs[0].alive);
    CHECK(sim.world().agents[0].gold == 4);
    CHECK(sim.world().minted_gold == 4);
    const auto loot = grab(sim, range, EventKind::Loot);
    REQUIRE(loot.size() == 1);
    CHECK(loot[0].actor == 0);
    CHECK(loot[0].target == 128);
    CHECK(loot[0].value == 4);
    CHECK(loot[0].item_level == 4);
    REQUIRE(sim.world().agents[0].inventory.size() == 1);
    CHECK(sim.world().agents[0].inventory[0].level == 4);
    const auto npc_deaths = grab(sim, range, EventKind::NpcDeath);
    REQUIRE(npc_deaths.size() == 1);
    CHECK(npc_deaths[0].aux == 1);  // slain, not consumed by fog
    CHECK(npc_deaths[0].target == 0);
    CHECK(npc_deaths[0].value == 4);
    for (std::int64_t credit : sim.world().defeat_credits) CHECK(credit == 0);

    // The corpse clears the tile.
    MatchActions move{};
    act(move, 0).move = Direction::East;
    range = sim.step(move);
    REQUIRE(grab(sim, range, EventKind::Move).size() == 1);
    CHECK(sim.world().agents[0].pos == run[1]);
}

TEST_CASE("npcs burned down by fog drop nothing") {
    SimConfig cfg = npc_cfg();
    cfg.fog_start_tick = 1;
    cfg.fog_shrink_interval = 1;
    Sim sim(cfg, 173);
    // Park the npc three tiles from the border; the ring catches it at tick 4.
    Coord spot{-1, -1};
    const GameMap& map = sim.world().map;
    for (int r = 0; spot.r < 0 && r < map.size(); ++r) {
        for (int c = 0; c < map.size(); ++c) {
            const Coord p{r, c};
            if (map.border_distance(p) == 3 && map.passable(p) &&
                sim.world().occupancy[r * map.size() + c] == -1) {
                spot = p;
                break;
            }
        }
    }
    REQUIRE(spot.r >= 0);
    stage_single_npc(sim, NpcType::Passive, 5, spot);
    sim.world_mut().npcs[0].hp = 2;

    for (int i = 0; i < 5; ++i) sim.step({});
    CHECK(sim.world().npcs[0].hp == 1);  // first burn at inset 4
    const auto range = sim.step({});
    REQUIRE(!sim.world().npcs[0].alive);
    const auto npc_deaths = grab(sim, range, EventKind::NpcDeath);
    REQUIRE(npc_deaths.size() == 1);
    CHECK(npc_deaths[0].aux == 0);  // not slain
    CHECK(npc_deaths[0].target == -1);
    CHECK(grab(sim, range, EventKind::Loot).empty());
    CHECK(sim.world().minted_gold == 0);
}

}  // TEST_SUITE
