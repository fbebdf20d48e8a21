#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "arena/entities.hpp"
#include "arena/geometry.hpp"
#include "arena/items.hpp"

namespace arena {

// Everything that happens in a match is recorded as one of these. Invalid
// or failed sub-actions become Masked events carrying a MaskReason plus a
// detail code in `value`; MoveBlocked is separate because a lost movement
// race is a resolved conflict, not a rejected action.
enum class EventKind : std::uint8_t {
    Move = 0,
    MoveBlocked,
    Attack,
    Harvest,       // item yield or direct restore
    HarvestLost,   // inventory full, tile untouched
    Use,           // consumable consumed
    Equip,
    List,
    Buy,
    Comm,
    Loot,
    ItemDestroyed,
    Death,
    NpcDeath,
    FogShrink,
    Masked,
    Survive,  // end-of-match snapshot, one per living agent
    Holding,  // one per stack still held at match end (follows Survive)
};

inline constexpr int kEventKindCount = 18;

inline constexpr std::array<std::string_view, kEventKindCount> kEventTags = {
    "mv", "mb", "at", "hv", "hl", "us", "eq", "ls", "by",
    "cm", "lt", "xd", "de", "nd", "fs", "mk", "sv", "hd",
};

// Sub-action slot for Masked events. BadBuy detail codes in Event.value:
// 1 bad/stale window index, 2 self-purchase, 3 insufficient gold,
// 4 no inventory room, 5 listing taken by a lower-id buyer this tick.
// BadAttack detail 1 = target became incapacitated earlier this tick.
enum class MaskReason : std::uint8_t {
    BadMove = 0,
    BadAttack,
    BadUse,
    BadSell,
    BadBuy,
    BadComm,
};

// Why an item left the world, for ItemDestroyed events.
enum class DestroyReason : std::uint8_t {
    DeathInventory = 0,
    DeathEquipment,
    DeathListing,
    LootOverflow,
};

// A flat record; field meaning depends on kind. Unused fields stay at their
// defaults and are omitted from serialized replays.
struct Event {
    EventKind kind = EventKind::Move;
    int tick = 0;
    int actor = -1;        // acting entity id
    int target = -1;       // victim / seller / killer, by kind
    Coord pos{};           // location involved
    std::int64_t value = 0;  // damage, price, gold, token, inset, restore amount
    ItemKind item = ItemKind::Shaving;
    int item_level = 0;    // 0 = no item attached
    int quantity = 0;
    AttackStyle style = AttackStyle::Melee;
    int aux = 0;           // cause / reason / profession / level_sum, by kind

    friend bool operator==(const Event&, const Event&) = default;
};

}  // namespace arena
