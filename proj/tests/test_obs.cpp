#include <doctest.h>

#include <algorithm>
#include <set>

#include "arena/engine.hpp"

using namespace arena;

namespace {

SimConfig quiet_cfg() {
    SimConfig cfg;
    cfg.map.size = 64;
    cfg.map.npc_count = 0;
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

std::vector<Coord> isolated_run(const Sim& sim, int n) {
    const GameMap& map = sim.world().map;
    for (int r = 14; r < map.size() - 14; ++r) {
        for (int c = 14; c + n <= map.size() - 14; ++c) {
            bool ok = true;
            for (int i = 0; ok && i < n; ++i) {
                const Coord p{r, c + i};
                ok = map.passable(p) &&
                     sim.world().occupancy[p.r * map.size() + p.c] == -1;
            }
            for (const AgentState& a : sim.world().agents) {
                if (!ok) break;
                if (a.alive && chebyshev(a.pos, {r, c}) < 12) ok = false;
            }
            for (const NpcState& np : sim.world().npcs) {
                if (!ok) break;
                if (np.alive && chebyshev(np.pos, {r, c}) < 12) ok = false;
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

bool team_hears(const TeamObservation& obs, int speaker, int token) {
    for (const CommHeard& h : obs.comms) {
        if (h.speaker == speaker && h.token == token) return true;
    }
    return false;
}

}  // namespace

TEST_SUITE("observation") {

TEST_CASE("reset observations carry the full safe map and empty feeds") {
    Sim sim(quiet_cfg(), 31);
    for (int t = 0; t < kTeamCount; ++t) {
        const TeamObservation& obs = sim.obs(t);
        CHECK(obs.team_id == t);
        CHECK(obs.tick == 0);
        CHECK(obs.horizon == 400);
        CHECK(obs.fog_safe == Rect{0, 0, 63, 63});
        CHECK(obs.next_fog_safe == Rect{1, 1, 62, 62});
        CHECK(obs.comms.empty());
        CHECK(obs.market_window.empty());
        for (int k = 0; k < kTeamSize; ++k) {
            CHECK(obs.teammates[k].agent_id == t * kTeamSize + k);
            CHECK(obs.teammates[k].hp == 100);
        }
    }
}

TEST_CASE("comm tokens reach every team with a window on the speaker") {
    Sim sim(quiet_cfg(), 32);
    const auto run = isolated_run(sim, 2);
    teleport(sim, 0, run[0]);
    teleport(sim, 8, run[1]);

    MatchActions m{};
    act(m, 0).comm = 77;
    const auto range = sim.step(m);

    CHECK(sim.events()[range.first].kind == EventKind::Comm);
    CHECK(sim.events()[range.first].value == 77);
    CHECK(team_hears(sim.obs(0), 0, 77));  // own window counts too
    CHECK(team_hears(sim.obs(1), 0, 77));
    REQUIRE(sim.obs(1).comms.size() == 1);
    CHECK(sim.obs(1).comms[0].pos == run[0]);
    for (int t = 2; t < kTeamCount; ++t) CHECK(sim.obs(t).comms.empty());

    // Tokens last one tick.
    sim.step({});
    for (int t = 0; t < kTeamCount; ++t) CHECK(sim.obs(t).comms.empty());
}

TEST_CASE("out-of-range comm tokens are masked") {
    Sim sim(quiet_cfg(), 33);
    MatchActions m{};
    act(m, 5).comm = 200;
    act(m, 6).comm = -3;
    const auto range = sim.step(m);
    int masked = 0;
    for (std::size_t i = range.first; i < range.second; ++i) {
        const Event& e = sim.events()[i];
        if (e.kind == EventKind::Masked) {
            CHECK(e.aux == static_cast<int>(MaskReason::BadComm));
            ++masked;
        }
    }
    CHECK(masked == 2);
    for (int t = 0; t < kTeamCount; ++t) CHECK(sim.obs(t).comms.empty());
}

TEST_CASE("visible lists are exactly the union of teammate windows") {
    SimConfig cfg;
    cfg.map.size = 64;
    cfg.map.npc_count = 24;
    cfg.horizon = 400;
    cfg.fog_start_tick = 1 << 20;
    Sim sim(cfg, 34);

    // Scripted shuffle walk to mix the spawn rings together.
    for (int t = 0; t < 30; ++t) {
        MatchActions m{};
        for (int id = 0; id < kAgentCount; ++id) {
            act(m, id).move = kCardinalDirections[(id + t) % 4];
        }
        sim.step(m);
    }

    const WorldState& w = sim.world();
    for (int team = 0; team < kTeamCount; ++team) {
        std::set<int> expect;
        for (int k = 0; k < kTeamSize; ++k) {
            const AgentState& self = w.agents[team * kTeamSize + k];
            if (!self.alive) continue;
            for (const AgentState& other : w.agents) {
                if (other.alive && other.team_id != team &&
                    chebyshev(self.pos, other.pos) <= kVisionRadius) {
                    expect.insert(other.agent_id);
                }
            }
            for (const NpcState& n : w.npcs) {
                if (n.alive && chebyshev(self.pos, n.pos) <= kVisionRadius) {
                    expect.insert(n.npc_id);
                }
            }
        }
        const TeamObservation& obs = sim.obs(team);
        std::vector<int> got;
        for (const VisibleEntity& v : obs.visible) {
            got.push_back(v.entity_id);
            CHECK(v.hp > 0);
            if (v.is_npc) {
                const NpcState& n = w.npcs[v.entity_id - kAgentCount];
                CHECK(v.team_id == -1);
                CHECK(v.pos == n.pos);
                CHECK(v.hp == n.hp);
                CHECK(v.npc_type == n.type);
                CHECK(v.npc_level == n.level);
            } else {
                const AgentState& a = w.agents[v.entity_id];
                CHECK(v.team_id == a.team_id);
                CHECK(v.pos == a.pos);
                CHECK(v.hp == a.hp);
                CHECK(v.main_style == a.main_style(sim.cfg()));
                const auto& weapon = a.equipment.weapon;
                CHECK(v.weapon_level == (weapon ? weapon->level : 0));
            }
        }
        CHECK(std::is_sorted(got.begin(), got.end()));
        CHECK(std::vector<int>(expect.begin(), expect.end()) == got);
    }
}

TEST_CASE("terrain patches read the map and clip to lava") {
    Sim sim(quiet_cfg(), 35);
    const GameMap& map = sim.world().map;
    int clipped = 0;
    for (int team = 0; team < kTeamCount; ++team) {
        const TeamObservation& obs = sim.obs(team);
        for (int k = 0; k < kTeamSize; ++k) {
            const AgentState& a = sim.world().agents[team * kTeamSize + k];
            REQUIRE(a.alive);
            const TerrainPatch& patch = obs.patches[k];
            CHECK(patch.center == a.pos);
            for (int dr = -kVisionRadius; dr <= kVisionRadius; ++dr) {
                for (int dc = -kVisionRadius; dc <= kVisionRadius; ++dc) {
                    const Coord p{a.pos.r + dr, a.pos.c + dc};
                    if (map.in_bounds(p)) {
                        CHECK(patch.at(dr, dc) == map.kind(p));
                    } else {
                        CHECK(patch.at(dr, dc) == TerrainKind::Lava);
                        ++clipped;
                    }
                }
            }
        }
    }
    CHECK(clipped > 0);  // spawn rings hug the border, so windows must clip
}

TEST_CASE("market window is shared, sorted by price then id") {
    Sim sim(quiet_cfg(), 36);
    WorldState& w = sim.world_mut();
    inventory_add(w.agents[0].inventory, ItemKind::Hat, 3, 1);
    inventory_add(w.agents[8].inventory, ItemKind::Sword, 2, 1);
    inventory_add(w.agents[16].inventory, ItemKind::Shaving, 1, 4);

    MatchActions m{};
    act(m, 0).sell = SellCmd{0, 5};
    act(m, 8).sell = SellCmd{0, 3};
    act(m, 16).sell = SellCmd{0, 5};
    sim.step(m);

    const TeamObservation& obs = sim.obs(0);
    REQUIRE(obs.market_window.size() == 3);
    CHECK(obs.market_window[0].price == 3);
    CHECK(obs.market_window[0].seller == 8);
    CHECK(obs.market_window[0].kind == ItemKind::Sword);
    CHECK(obs.market_window[1].price == 5);
    CHECK(obs.market_window[1].seller == 0);
    CHECK(obs.market_window[2].price == 5);
    CHECK(obs.market_window[2].seller == 16);
    CHECK(obs.market_window[1].listing_id < obs.market_window[2].listing_id);

    REQUIRE(sim.world().market_window_ids.size() == 3);
    for (int t = 0; t < kTeamCount; ++t) {
        const TeamObservation& other = sim.obs(t);
        REQUIRE(other.market_window.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(other.market_window[i].listing_id ==
                  sim.world().market_window_ids[i]);
        }
    }
}

}  // TEST_SUITE
