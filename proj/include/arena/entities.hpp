#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "arena/config.hpp"
#include "arena/geometry.hpp"
#include "arena/items.hpp"
#include "arena/worldgen.hpp"

namespace arena {

inline int skill_level(int xp, int xp_per_level) {
    return std::min(10, 1 + xp / xp_per_level);
}

// Equipment slots. Only the ammo slot holds quantity > 1.
struct Equipment {
    std::optional<ItemStack> weapon;
    std::optional<ItemStack> hat;
    std::optional<ItemStack> top;
    std::optional<ItemStack> bottom;
    std::optional<ItemStack> ammo;
    std::optional<ItemStack> tool;

    std::optional<ItemStack>& slot(ItemKind kind) {
        switch (item_category(kind)) {
            case ItemCategory::Weapon: return weapon;
            case ItemCategory::Ammunition: return ammo;
            case ItemCategory::Tool: return tool;
            default: break;
        }
        if (kind == ItemKind::Hat) return hat;
        if (kind == ItemKind::Top) return top;
        return bottom;
    }

    int armor_levels() const {
        int total = 0;
        for (const auto* s : {&hat, &top, &bottom}) {
            if (*s) total += (*s)->level;
        }
        return total;
    }

    // Equipped weapon/ammo level if it matches the attack style, else 0.
    int weapon_level(AttackStyle style) const {
        return weapon && item_style(weapon->kind) == style ? weapon->level : 0;
    }
    int ammo_level(AttackStyle style) const {
        return ammo && item_style(ammo->kind) == style ? ammo->level : 0;
    }

    int tool_level(SkillKind profession) const {
        return tool && tool_profession(tool->kind) == profession ? tool->level : 1;
    }

    friend bool operator==(const Equipment&, const Equipment&) = default;
};

enum class DeathCause : std::uint8_t { None = 0, Slain, NpcSlain, Fog, Starvation };

inline constexpr std::array<std::string_view, 5> kDeathCauseNames = {
    "none", "slain", "npc", "fog", "starvation"};

struct AgentState {
    int agent_id = -1;
    int team_id = -1;
    Coord pos;
    int hp = 100;
    int food_half = 200;   // food and water in half-points, 200 = full bar
    int water_half = 200;
    std::array<int, kSkillCount> xp{};
    std::vector<ItemStack> inventory;  // up to kInventorySlots stacks
    Equipment equipment;
    std::int64_t gold = 0;
    bool alive = true;
    int death_tick = -1;
    int level_sum_snapshot = 0;  // sum of the 8 skill levels, frozen at death/horizon
    DeathCause death_cause = DeathCause::None;
    int killer = -1;  // entity id of the final blow, -1 for fog/starvation

    // Transient per-tick fields, not part of the persistent state.
    int comm_token = -1;
    int comm_tick = -1;

    int level(SkillKind skill, const SimConfig& cfg) const {
        return skill_level(xp[static_cast<int>(skill)], cfg.xp_per_level);
    }

    int level_sum(const SimConfig& cfg) const {
        int sum = 0;
        for (int s = 0; s < kSkillCount; ++s) {
            sum += skill_level(xp[s], cfg.xp_per_level);
        }
        return sum;
    }

    // Highest combat skill; ties break Melee > Range > Mage.
    AttackStyle main_style(const SimConfig& cfg) const {
        AttackStyle best = AttackStyle::Melee;
        int best_level = level(SkillKind::Melee, cfg);
        for (AttackStyle s : {AttackStyle::Range, AttackStyle::Mage}) {
            const int l = level(style_skill(s), cfg);
            if (l > best_level) {
                best = s;
                best_level = l;
            }
        }
        return best;
    }
};

// Returns the inventory slot the stack would land in, or -1 when full.
inline int inventory_slot_for(const std::vector<ItemStack>& inv, ItemKind kind, int level) {
    if (item_stackable(kind)) {
        for (std::size_t i = 0; i < inv.size(); ++i) {
            if (inv[i].kind == kind && inv[i].level == level) return static_cast<int>(i);
        }
    }
    return static_cast<int>(inv.size()) < kInventorySlots ? static_cast<int>(inv.size()) : -1;
}

// Adds the stack, merging with an existing stack of the same kind and level.
// Returns false when the inventory has no room.
inline bool inventory_add(std::vector<ItemStack>& inv, ItemKind kind, int level,
                          int quantity = 1) {
    const int slot = inventory_slot_for(inv, kind, level);
    if (slot < 0) return false;
    if (slot < static_cast<int>(inv.size())) {
        inv[slot].quantity += quantity;
    } else {
        inv.push_back({kind, level, quantity});
    }
    return true;
}

struct NpcState {
    int npc_id = -1;  // entity id: kAgentCount + index
    Coord pos;
    NpcType type = NpcType::Passive;
    int level = 1;
    int hp = 0;
    bool alive = true;
    int last_hitter = -1;  // agent id of the most recent attacker
    bool slain = false;    // hp reached 0 from an attack (loot) rather than fog

    int max_hp(const SimConfig& cfg) const {
        return cfg.npc_hp_base + cfg.npc_hp_per_level * level;
    }
};

inline bool is_npc_id(int entity_id) { return entity_id >= kAgentCount; }

}  // namespace arena
