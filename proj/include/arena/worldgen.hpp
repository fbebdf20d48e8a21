#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "arena/config.hpp"
#include "arena/geometry.hpp"
#include "arena/terrain.hpp"

namespace arena {

class WorldgenError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Tile {
    TerrainKind kind = TerrainKind::Grass;
    int respawn_timer = 0;  // ticks until a degraded tile reverts; 0 = none

    friend bool operator==(const Tile&, const Tile&) = default;
};

class GameMap {
  public:
    GameMap() = default;
    GameMap(int size, TerrainKind fill) : size_(size), tiles_(size * size, Tile{fill, 0}) {}

    int size() const { return size_; }

    bool in_bounds(Coord p) const {
        return p.r >= 0 && p.r < size_ && p.c >= 0 && p.c < size_;
    }

    const Tile& at(Coord p) const { return tiles_[p.r * size_ + p.c]; }
    Tile& at(Coord p) { return tiles_[p.r * size_ + p.c]; }

    TerrainKind kind(Coord p) const { return at(p).kind; }
    bool passable(Coord p) const { return in_bounds(p) && terrain_passable(kind(p)); }

    int border_distance(Coord p) const {
        return std::min({p.r, p.c, size_ - 1 - p.r, size_ - 1 - p.c});
    }

    // Chebyshev distance to the central tile block (2x2 for even sizes).
    int center_distance(Coord p) const {
        const int lo = (size_ - 1) / 2;
        const int hi = size_ / 2;
        const int dr = std::max({lo - p.r, p.r - hi, 0});
        const int dc = std::max({lo - p.c, p.c - hi, 0});
        return std::max(dr, dc);
    }

    int max_center_distance() const { return size_ - 1 - size_ / 2; }

    const std::vector<Tile>& tiles() const { return tiles_; }
    std::vector<Tile>& tiles() { return tiles_; }

    std::array<int, kTerrainKindCount> histogram() const;

    friend bool operator==(const GameMap&, const GameMap&) = default;

  private:
    int size_ = 0;
    std::vector<Tile> tiles_;
};

struct SpawnPlan {
    // team_slots[t] holds the 8 spawn coordinates of team t.
    std::array<std::array<Coord, kTeamSize>, kTeamCount> team_slots{};
};

enum class NpcType : std::uint8_t { Passive = 0, Neutral, Hostile };

inline constexpr std::array<std::string_view, 3> kNpcTypeNames = {"passive", "neutral",
                                                                  "hostile"};

struct NpcSpawn {
    Coord pos;
    NpcType type = NpcType::Passive;
    int level = 1;  // 1..10, higher toward the map center
};

// Deterministic map generation. Same config -> identical grid.
GameMap generate_map(const MapGenConfig& cfg);

// Exact tile count generate_map places for a kind with a positive ratio:
// max(1, round(ratio * interior)) where interior excludes the lava border
// and the two grass spawn rings. Grass itself fills the remainder.
int map_quota(const MapGenConfig& cfg, TerrainKind kind);

// Degradation target of a harvested tile. Throws WorldgenError for kinds
// that cannot be harvested.
TerrainKind tile_transition(TerrainKind kind);

// Places 16 team clusters of 8 agents each along the map border. The
// team -> cluster assignment is a seeded permutation.
SpawnPlan spawn_positions(std::uint64_t seed, const GameMap& map);

// Scatters NPCs over interior tiles; level grows toward the center and the
// three behavior types stay balanced within one.
std::vector<NpcSpawn> npc_placement(std::uint64_t seed, const GameMap& map, int count);

int npc_level_for(const GameMap& map, Coord pos);

// Map snapshot as versioned JSON with run-length-encoded tile kinds.
std::string map_to_json(const GameMap& map, std::uint64_t seed);
GameMap map_from_json(const std::string& text);

}  // namespace arena
