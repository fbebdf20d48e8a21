#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "arena/terrain.hpp"

namespace arena {

// Fixed by the game design; not configurable.
inline constexpr int kTeamCount = 16;
inline constexpr int kTeamSize = 8;
inline constexpr int kAgentCount = kTeamCount * kTeamSize;  // 128
inline constexpr int kInventorySlots = 12;
inline constexpr int kVisionRadius = 7;  // 15x15 window
inline constexpr int kCommTokens = 128;
inline constexpr int kMarketWindowSize = 170;

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct MapGenConfig {
    int size = 128;
    std::array<double, kTerrainKindCount> ratios = default_ratios();
    int npc_count = 96;
    std::uint64_t seed = 0;

    static constexpr std::array<double, kTerrainKindCount> default_ratios() {
        std::array<double, kTerrainKindCount> r{};
        r[static_cast<int>(TerrainKind::Grass)] = 0.55;
        r[static_cast<int>(TerrainKind::Forest)] = 0.12;
        r[static_cast<int>(TerrainKind::Water)] = 0.06;
        r[static_cast<int>(TerrainKind::Stone)] = 0.05;
        r[static_cast<int>(TerrainKind::Ore)] = 0.03;
        r[static_cast<int>(TerrainKind::Tree)] = 0.03;
        r[static_cast<int>(TerrainKind::Crystal)] = 0.03;
        r[static_cast<int>(TerrainKind::Herb)] = 0.03;
        r[static_cast<int>(TerrainKind::Fish)] = 0.04;
        r[static_cast<int>(TerrainKind::Lava)] = 0.01;
        return r;
    }

    double ratio(TerrainKind k) const { return ratios[static_cast<int>(k)]; }
    void set_ratio(TerrainKind k, double v) { ratios[static_cast<int>(k)] = v; }

    // Throws ConfigError on invalid settings.
    void validate() const;
};

// Every tunable the rules leave open lives here; the values below are the
// defaults used throughout the test suite.
struct SimConfig {
    MapGenConfig map;

    int horizon = 1280;

    // Fog ("blue circle").
    int fog_start_tick = 240;
    int fog_shrink_interval = 16;
    int fog_damage_per_tile = 1;  // hp per tile of distance per tick

    // Metabolism. Food/water are tracked in half-points (200 = full bar).
    int decay_half_per_tick = 1;     // 0.5 points of food and water per tick
    int starve_hp_per_tick = 1;      // hp lost per tick per empty bar
    int regen_threshold = 50;        // both bars above this -> regen
    int regen_hp_per_tick = 1;

    // Combat damage model.
    int base_power = 10;
    int skill_power = 2;    // per attack-skill level
    int weapon_power = 3;   // per matching weapon level
    int ammo_power = 1;     // per matching ammunition level
    int armor_defense = 2;  // per armor level (hat+top+bottom)
    int min_damage = 1;
    int dominance_num = 3;  // dominant-style multiplier as a fraction
    int dominance_den = 2;

    // NPCs.
    int npc_hp_base = 20;
    int npc_hp_per_level = 10;

    // Economy and skills.
    int consumable_restore_per_level = 10;  // points per consumable level
    int xp_per_level = 10;

    // Terrain regeneration.
    int resource_respawn_ticks = 50;

    void validate() const;

    // Flat key=value config file.
    static SimConfig load_file(const std::string& path);
    static SimConfig parse(const std::string& text);
    std::string serialize() const;
};

}  // namespace arena
