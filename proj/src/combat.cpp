#include "arena/combat.hpp"

#include <array>
#include <vector>

namespace arena {

ItemStack npc_loot_item(int npc_level, Rng& rng) {
    static const std::array<std::vector<ItemKind>, kItemCategoryCount> by_category = [] {
        std::array<std::vector<ItemKind>, kItemCategoryCount> t;
        for (int k = 0; k < kItemKindCount; ++k) {
            const auto kind = static_cast<ItemKind>(k);
            t[static_cast<int>(item_category(kind))].push_back(kind);
        }
        return t;
    }();
    const auto& kinds = by_category[rng.index(kItemCategoryCount)];
    return {kinds[rng.index(kinds.size())], npc_level, 1};
}

}  // namespace arena
