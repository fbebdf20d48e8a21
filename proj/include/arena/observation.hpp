#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "arena/entities.hpp"
#include "arena/geometry.hpp"
#include "arena/market.hpp"

namespace arena {

inline constexpr int kPatchSide = 2 * kVisionRadius + 1;  // 15

// What a team may know about a non-teammate entity: public fields only.
struct VisibleEntity {
    int entity_id = -1;  // agents 0..127, NPCs 128+
    int team_id = -1;    // -1 for NPCs
    Coord pos;
    int hp = 0;
    AttackStyle main_style = AttackStyle::Melee;
    bool is_npc = false;
    NpcType npc_type = NpcType::Passive;
    int npc_level = 0;
    // Equipment levels are public (they are worn in the open); 0 = empty slot.
    int weapon_level = 0;
    int armor_levels = 0;
};

struct MarketEntry {
    std::int64_t listing_id = 0;
    int seller = -1;
    ItemKind kind = ItemKind::Shaving;
    int level = 1;
    std::int64_t price = 0;
};

struct CommHeard {
    int speaker = -1;  // agent id
    Coord pos;
    int token = 0;
};

// 15x15 terrain window around one teammate. Tiles outside the map read as
// Lava (impassable filler).
struct TerrainPatch {
    Coord center;
    std::array<TerrainKind, kPatchSide * kPatchSide> tiles{};

    TerrainKind at(int dr, int dc) const {
        return tiles[(dr + kVisionRadius) * kPatchSide + (dc + kVisionRadius)];
    }
};

struct TeamObservation {
    int team_id = -1;
    int tick = 0;
    int horizon = 0;
    Rect fog_safe;
    Rect next_fog_safe;  // the rectangle one shrink from now
    std::array<AgentState, kTeamSize> teammates{};  // full self-view, id order
    std::array<TerrainPatch, kTeamSize> patches{};  // alive teammates only
    std::vector<VisibleEntity> visible;             // union over windows, id order
    std::vector<MarketEntry> market_window;         // price asc, listing id asc
    std::vector<CommHeard> comms;                   // tokens spoken last tick
};

// JSON codec for the external-policy line protocol.
std::string observation_to_json(const TeamObservation& obs);

}  // namespace arena
