#pragma once

#include "arena/config.hpp"
#include "arena/entities.hpp"
#include "arena/items.hpp"
#include "arena/rng.hpp"

namespace arena {

// The dominance cycle: Melee > Range > Mage > Melee.
constexpr bool style_dominates(AttackStyle attacker, AttackStyle defender) {
    return (attacker == AttackStyle::Melee && defender == AttackStyle::Range) ||
           (attacker == AttackStyle::Range && defender == AttackStyle::Mage) ||
           (attacker == AttackStyle::Mage && defender == AttackStyle::Melee);
}

constexpr AttackStyle dominant_style_against(AttackStyle defender_main) {
    switch (defender_main) {
        case AttackStyle::Melee: return AttackStyle::Mage;
        case AttackStyle::Range: return AttackStyle::Melee;
        case AttackStyle::Mage: return AttackStyle::Range;
    }
    return AttackStyle::Melee;
}

inline double dominance_multiplier(AttackStyle attacker, AttackStyle defender_main,
                                   const SimConfig& cfg) {
    return style_dominates(attacker, defender_main)
               ? static_cast<double>(cfg.dominance_num) / cfg.dominance_den
               : 1.0;
}

inline int attack_power(int skill_lvl, int weapon_lvl, int ammo_lvl, const SimConfig& cfg) {
    return cfg.base_power + cfg.skill_power * skill_lvl + cfg.weapon_power * weapon_lvl +
           cfg.ammo_power * ammo_lvl;
}

// damage = max(floor, round(dominance * power) - defense), in exact integer
// arithmetic (round half up on the dominance product).
inline int resolve_damage(int power, bool dominant, int defense, const SimConfig& cfg) {
    int scaled = power;
    if (dominant) {
        scaled = (power * cfg.dominance_num + cfg.dominance_den / 2) / cfg.dominance_den;
    }
    return std::max(cfg.min_damage, scaled - defense);
}

// Damage of one agent-vs-entity hit. Ammo consumption is the caller's job.
inline int agent_attack_damage(const AgentState& attacker, AttackStyle style,
                               AttackStyle defender_main, int defender_armor_levels,
                               const SimConfig& cfg) {
    const int power = attack_power(attacker.level(style_skill(style), cfg),
                                   attacker.equipment.weapon_level(style),
                                   attacker.equipment.ammo_level(style), cfg);
    const int defense = cfg.armor_defense * defender_armor_levels;
    return resolve_damage(power, style_dominates(style, defender_main), defense, cfg);
}

inline int npc_attack_damage(int npc_level, AttackStyle style, AttackStyle defender_main,
                             int defender_armor_levels, const SimConfig& cfg) {
    const int power = attack_power(npc_level, 0, 0, cfg);
    const int defense = cfg.armor_defense * defender_armor_levels;
    return resolve_damage(power, style_dominates(style, defender_main), defense, cfg);
}

// Loot of a freshly defeated NPC: level gold plus one item of the NPC's
// level, category drawn uniformly, kind uniform within the category.
ItemStack npc_loot_item(int npc_level, Rng& rng);

}  // namespace arena
