#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "arena/terrain.hpp"

namespace arena {

enum class AttackStyle : std::uint8_t { Melee = 0, Range, Mage };

inline constexpr std::array<std::string_view, 3> kStyleNames = {"melee", "range", "mage"};

enum class SkillKind : std::uint8_t {
    Melee = 0,
    Range,
    Mage,
    Fishing,
    Herbalism,
    Prospecting,
    Carving,
    Alchemy,
};

inline constexpr int kSkillCount = 8;

inline constexpr std::array<std::string_view, kSkillCount> kSkillNames = {
    "melee", "range", "mage", "fishing", "herbalism", "prospecting", "carving", "alchemy",
};

constexpr bool skill_is_combat(SkillKind s) {
    return s == SkillKind::Melee || s == SkillKind::Range || s == SkillKind::Mage;
}

constexpr SkillKind style_skill(AttackStyle s) {
    return static_cast<SkillKind>(static_cast<int>(s));
}

enum class ItemKind : std::uint8_t {
    Shaving = 0,
    Scrap,
    Shard,
    Sword,
    Bow,
    Wand,
    Hat,
    Top,
    Bottom,
    Ration,
    Poultice,
    Rod,
    Gloves,
    Pickaxe,
    Chisel,
    ArcaneFocus,
};

inline constexpr int kItemKindCount = 16;

inline constexpr std::array<std::string_view, kItemKindCount> kItemNames = {
    "shaving", "scrap",    "shard", "sword",  "bow",      "wand",
    "hat",     "top",      "bottom", "ration", "poultice", "rod",
    "gloves",  "pickaxe",  "chisel", "arcane_focus",
};

enum class ItemCategory : std::uint8_t { Ammunition = 0, Weapon, Armor, Consumable, Tool };

inline constexpr int kItemCategoryCount = 5;

inline constexpr std::array<std::string_view, kItemCategoryCount> kItemCategoryNames = {
    "ammunition", "weapon", "armor", "consumable", "tool",
};

constexpr ItemCategory item_category(ItemKind k) {
    switch (k) {
        case ItemKind::Shaving:
        case ItemKind::Scrap:
        case ItemKind::Shard:
            return ItemCategory::Ammunition;
        case ItemKind::Sword:
        case ItemKind::Bow:
        case ItemKind::Wand:
            return ItemCategory::Weapon;
        case ItemKind::Hat:
        case ItemKind::Top:
        case ItemKind::Bottom:
            return ItemCategory::Armor;
        case ItemKind::Ration:
        case ItemKind::Poultice:
            return ItemCategory::Consumable;
        default:
            return ItemCategory::Tool;
    }
}

// Ammunition and consumables stack; everything else is one per slot.
constexpr bool item_stackable(ItemKind k) {
    const ItemCategory c = item_category(k);
    return c == ItemCategory::Ammunition || c == ItemCategory::Consumable;
}

// Combat style served by a weapon or ammunition kind.
constexpr std::optional<AttackStyle> item_style(ItemKind k) {
    switch (k) {
        case ItemKind::Sword:
        case ItemKind::Shaving:
            return AttackStyle::Melee;
        case ItemKind::Bow:
        case ItemKind::Scrap:
            return AttackStyle::Range;
        case ItemKind::Wand:
        case ItemKind::Shard:
            return AttackStyle::Mage;
        default:
            return std::nullopt;
    }
}

constexpr std::optional<SkillKind> tool_profession(ItemKind k) {
    switch (k) {
        case ItemKind::Rod: return SkillKind::Fishing;
        case ItemKind::Gloves: return SkillKind::Herbalism;
        case ItemKind::Pickaxe: return SkillKind::Prospecting;
        case ItemKind::Chisel: return SkillKind::Carving;
        case ItemKind::ArcaneFocus: return SkillKind::Alchemy;
        default: return std::nullopt;
    }
}

constexpr ItemKind ammo_for_style(AttackStyle s) {
    switch (s) {
        case AttackStyle::Melee: return ItemKind::Shaving;
        case AttackStyle::Range: return ItemKind::Scrap;
        case AttackStyle::Mage: return ItemKind::Shard;
    }
    return ItemKind::Shaving;
}

constexpr ItemKind weapon_for_style(AttackStyle s) {
    switch (s) {
        case AttackStyle::Melee: return ItemKind::Sword;
        case AttackStyle::Range: return ItemKind::Bow;
        case AttackStyle::Mage: return ItemKind::Wand;
    }
    return ItemKind::Sword;
}

// Item yielded by harvesting a resource tile, if any. Water and Forest
// restore the harvester directly instead.
constexpr std::optional<ItemKind> terrain_product(TerrainKind t) {
    switch (t) {
        case TerrainKind::Ore: return ItemKind::Shaving;
        case TerrainKind::Tree: return ItemKind::Scrap;
        case TerrainKind::Crystal: return ItemKind::Shard;
        case TerrainKind::Herb: return ItemKind::Ration;
        case TerrainKind::Fish: return ItemKind::Poultice;
        default: return std::nullopt;
    }
}

// Profession skill that governs harvesting a resource tile.
constexpr std::optional<SkillKind> terrain_profession(TerrainKind t) {
    switch (t) {
        case TerrainKind::Ore: return SkillKind::Prospecting;
        case TerrainKind::Tree: return SkillKind::Carving;
        case TerrainKind::Crystal: return SkillKind::Alchemy;
        case TerrainKind::Herb: return SkillKind::Herbalism;
        case TerrainKind::Fish: return SkillKind::Fishing;
        default: return std::nullopt;
    }
}

inline constexpr int kMinItemLevel = 1;
inline constexpr int kMaxItemLevel = 10;

struct ItemStack {
    ItemKind kind = ItemKind::Shaving;
    int level = kMinItemLevel;  // 1..10
    int quantity = 1;           // > 1 only for stackable kinds

    friend bool operator==(const ItemStack&, const ItemStack&) = default;
};

}  // namespace arena
