#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace arena {

// Tile kinds. The numeric order is frozen: map snapshots and replays encode
// tiles by this index.
enum class TerrainKind : std::uint8_t {
    Lava = 0,
    Water,
    Grass,
    Scrub,
    Forest,
    Stone,
    Slag,
    Ore,
    Stump,
    Tree,
    Fragment,
    Crystal,
    Weeds,
    Herb,
    Ocean,
    Fish,
};

inline constexpr int kTerrainKindCount = 16;

inline constexpr std::array<std::string_view, kTerrainKindCount> kTerrainNames = {
    "lava", "water", "grass",    "scrub",   "forest", "stone", "slag",  "ore",
    "stump", "tree",  "fragment", "crystal", "weeds",  "herb",  "ocean", "fish",
};

constexpr bool terrain_passable(TerrainKind k) {
    switch (k) {
        case TerrainKind::Lava:
        case TerrainKind::Water:
        case TerrainKind::Stone:
        case TerrainKind::Ocean:
        case TerrainKind::Fish:
            return false;
        default:
            return true;
    }
}

constexpr bool terrain_harvestable(TerrainKind k) {
    switch (k) {
        case TerrainKind::Water:
        case TerrainKind::Forest:
        case TerrainKind::Ore:
        case TerrainKind::Tree:
        case TerrainKind::Crystal:
        case TerrainKind::Herb:
        case TerrainKind::Fish:
            return true;
        default:
            return false;
    }
}

// Degradation target of a harvestable kind. Water is harvested in place.
constexpr std::optional<TerrainKind> terrain_degrades_to(TerrainKind k) {
    switch (k) {
        case TerrainKind::Water: return TerrainKind::Water;
        case TerrainKind::Forest: return TerrainKind::Scrub;
        case TerrainKind::Ore: return TerrainKind::Slag;
        case TerrainKind::Tree: return TerrainKind::Stump;
        case TerrainKind::Crystal: return TerrainKind::Fragment;
        case TerrainKind::Herb: return TerrainKind::Weeds;
        case TerrainKind::Fish: return TerrainKind::Ocean;
        default: return std::nullopt;
    }
}

// Source kind a degraded tile respawns into.
constexpr std::optional<TerrainKind> terrain_respawns_to(TerrainKind k) {
    switch (k) {
        case TerrainKind::Scrub: return TerrainKind::Forest;
        case TerrainKind::Slag: return TerrainKind::Ore;
        case TerrainKind::Stump: return TerrainKind::Tree;
        case TerrainKind::Fragment: return TerrainKind::Crystal;
        case TerrainKind::Weeds: return TerrainKind::Herb;
        case TerrainKind::Ocean: return TerrainKind::Fish;
        default: return std::nullopt;
    }
}

constexpr bool terrain_degraded(TerrainKind k) {
    return terrain_respawns_to(k).has_value();
}

}  // namespace arena
