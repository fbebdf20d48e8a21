#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "arena/actions.hpp"
#include "arena/config.hpp"
#include "arena/entities.hpp"
#include "arena/events.hpp"
#include "arena/market.hpp"
#include "arena/observation.hpp"
#include "arena/rng.hpp"
#include "arena/worldgen.hpp"

namespace arena {

struct WorldState {
    std::uint64_t seed = 0;
    int tick = 0;
    bool terminal = false;
    GameMap map;
    std::vector<AgentState> agents;  // 128, id order
    std::vector<NpcState> npcs;
    Market market;
    std::array<std::int64_t, kTeamCount> defeat_credits{};
    std::int64_t minted_gold = 0;  // gold enters the world only as NPC loot
    int fog_inset = 0;
    std::vector<std::int64_t> market_window_ids;  // snapshot buy orders refer to
    std::vector<int> occupancy;                   // entity id per tile, -1 empty
};

// One match's deterministic tick engine. All randomness flows from the seed.
class Sim {
  public:
    Sim(const SimConfig& cfg, std::uint64_t seed);

    const SimConfig& cfg() const { return cfg_; }
    const WorldState& world() const { return world_; }
    // Scenario-setup hook for tests and tools; match drivers must treat the
    // world as read-only. Callers that move entities own the occupancy fixup.
    WorldState& world_mut() { return world_; }
    const TeamObservation& obs(int team) const { return observations_[team]; }
    const std::vector<Event>& events() const { return events_; }
    bool terminal() const { return world_.terminal; }

    // Advances one tick; returns the [begin, end) range of this tick's
    // events in events(). No-op once terminal.
    std::pair<std::size_t, std::size_t> step(const MatchActions& actions);

    // Events are stamped with the tick they occurred in; this maps a tick to
    // its event range (ticks with no events map to an empty range).
    std::pair<std::size_t, std::size_t> tick_events(int tick) const;

    int alive_team_count() const;

    // Canonical serialization of the full world state and its FNV-1a hash.
    std::string state_json() const;
    std::uint64_t state_hash() const;

    // Returns human-readable descriptions of any violated invariant.
    std::vector<std::string> check_invariants() const;

    static Rect rect_from_inset(int inset, int size);
    static int fog_inset_at(int tick, const SimConfig& cfg);
    static Rect fog_rect(int tick, int size, const SimConfig& cfg);
    static int fog_damage_at(Coord pos, const Rect& safe, const SimConfig& cfg);

  private:
    struct PendingAction {
        AgentAction action;
        bool has_attack = false;
        bool has_use = false;
        bool has_sell = false;
        std::int64_t buy_listing = -1;
        bool arrived = false;  // moved this tick, harvest follows
    };

    void push(Event e);
    void validate_actions(const MatchActions& actions);
    void stage_comm();
    void stage_sell();
    void stage_buy();
    void stage_use();
    void stage_attack();
    void stage_move();
    void stage_harvest();
    void stage_npc();
    void stage_metabolism_and_fog();
    void stage_deaths();
    void stage_respawn();
    void finalize_match();
    void build_observations();

    bool use_allowed(const AgentState& agent, int slot, std::string& why) const;
    void harvest_tile(AgentState& agent, Coord tile);
    void damage_agent(AgentState& agent, int amount, DeathCause cause, int source);
    void damage_npc(NpcState& npc, int amount, bool by_attack);
    void npc_attack(NpcState& npc, int victim_id);
    void npc_try_move(NpcState& npc, Coord target, bool toward);

    SimConfig cfg_;
    WorldState world_;
    Rng rng_;  // loot rolls and other in-match randomness
    std::array<TeamObservation, kTeamCount> observations_;
    std::vector<Event> events_;
    std::vector<std::size_t> tick_starts_;  // events_ index where each tick begins
    std::array<PendingAction, kAgentCount> pending_;
    std::vector<Coord> timered_tiles_;  // degraded tiles waiting to respawn
};

}  // namespace arena
