#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "arena/config.hpp"
#include "arena/geometry.hpp"
#include "arena/items.hpp"

namespace arena {

struct AttackCmd {
    int target = -1;  // entity id: agents 0..127, NPCs 128+
    AttackStyle style = AttackStyle::Melee;
};

struct SellCmd {
    int slot = -1;  // inventory index
    std::int64_t price = 0;
};

// One agent's decisions for a tick. Sub-actions are independent; an agent
// may move, attack, and trade in the same tick.
struct AgentAction {
    Direction move = Direction::Stay;
    std::optional<AttackCmd> attack;
    std::optional<int> use_slot;
    std::optional<SellCmd> sell;
    std::optional<int> buy_index;  // index into the observed market window
    std::optional<int> comm;      // token 0..127
};

using TeamActions = std::array<AgentAction, kTeamSize>;
using MatchActions = std::array<TeamActions, kTeamCount>;

}  // namespace arena
