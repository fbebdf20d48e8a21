#include "arena/policies.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <climits>
#include <cstdlib>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "arena/combat.hpp"
#include "arena/items.hpp"
#include "arena/rng.hpp"
#include "arena/terrain.hpp"

namespace arena {
namespace {

int rect_distance(Coord p, const Rect& r) {
    const int dr = std::max({r.lo_r - p.r, p.r - r.hi_r, 0});
    const int dc = std::max({r.lo_c - p.c, p.c - r.hi_c, 0});
    return std::max(dr, dc);
}

Coord rect_center(const Rect& r) {
    return {(r.lo_r + r.hi_r) / 2, (r.lo_c + r.hi_c) / 2};
}

// Distance from a point inside the rectangle to its boundary ring.
int rect_edge_distance(Coord p, const Rect& r) {
    return std::min({p.r - r.lo_r, r.hi_r - p.r, p.c - r.lo_c, r.hi_c - p.c});
}

// Terrain lookup across the team's stitched vision patches. Tiles nobody
// can see come back empty; one step from an alive agent always resolves.
struct PatchView {
    const TeamObservation* obs;

    std::optional<TerrainKind> tile(Coord p) const {
        for (int k = 0; k < kTeamSize; ++k) {
            if (!obs->teammates[k].alive) continue;
            const TerrainPatch& patch = obs->patches[k];
            const int dr = p.r - patch.center.r;
            const int dc = p.c - patch.center.c;
            if (std::abs(dr) <= kVisionRadius && std::abs(dc) <= kVisionRadius) {
                return patch.at(dr, dc);
            }
        }
        return std::nullopt;
    }

    bool walkable(Coord p) const {
        const auto t = tile(p);
        return t && terrain_passable(*t);
    }
};

SkillKind gear_gate(const SimConfig& cfg, const AgentState& self, ItemKind kind) {
    const ItemCategory cat = item_category(kind);
    if (cat == ItemCategory::Weapon || cat == ItemCategory::Ammunition) {
        return style_skill(*item_style(kind));
    }
    if (cat == ItemCategory::Tool) return *tool_profession(kind);
    return style_skill(self.main_style(cfg));  // armor
}

bool gear_usable(const SimConfig& cfg, const AgentState& self, const ItemStack& it) {
    return self.level(gear_gate(cfg, self, it.kind), cfg) >= it.level;
}

int equipped_level(const Equipment& eq, ItemKind kind) {
    const std::optional<ItemStack>* slot = nullptr;
    switch (item_category(kind)) {
        case ItemCategory::Weapon: slot = &eq.weapon; break;
        case ItemCategory::Ammunition: slot = &eq.ammo; break;
        case ItemCategory::Tool: slot = &eq.tool; break;
        default:
            slot = kind == ItemKind::Hat   ? &eq.hat
                   : kind == ItemKind::Top ? &eq.top
                                           : &eq.bottom;
    }
    return *slot ? (*slot)->level : 0;
}

int count_items(const AgentState& self, ItemKind kind) {
    int n = 0;
    for (const ItemStack& s : self.inventory) {
        if (s.kind == kind) n += s.quantity;
    }
    return n;
}

int find_item_slot(const AgentState& self, ItemKind kind) {
    for (std::size_t i = 0; i < self.inventory.size(); ++i) {
        if (self.inventory[i].kind == kind) return static_cast<int>(i);
    }
    return -1;
}

// Shared per-tick scratch for one team's decisions.
struct Plan {
    const SimConfig& cfg;
    const TeamObservation& obs;
    Rng& rng;
    PatchView view;
    TeamActions actions{};
    std::set<std::pair<int, int>> claimed;   // tiles teammates hold or move onto
    std::set<std::pair<int, int>> occupied;  // entity tiles at observation time
    std::array<std::vector<Coord>, kTerrainKindCount> tiles;

    Plan(const SimConfig& c, const TeamObservation& o, Rng& r)
        : cfg(c), obs(o), rng(r), view{&o} {
        for (int k = 0; k < kTeamSize; ++k) {
            const AgentState& a = obs.teammates[k];
            if (!a.alive) continue;
            claimed.insert({a.pos.r, a.pos.c});
            occupied.insert({a.pos.r, a.pos.c});
        }
        for (const VisibleEntity& v : obs.visible) {
            occupied.insert({v.pos.r, v.pos.c});
        }
        std::set<std::pair<int, int>> seen;
        for (int k = 0; k < kTeamSize; ++k) {
            if (!obs.teammates[k].alive) continue;
            const TerrainPatch& patch = obs.patches[k];
            for (int dr = -kVisionRadius; dr <= kVisionRadius; ++dr) {
                for (int dc = -kVisionRadius; dc <= kVisionRadius; ++dc) {
                    const Coord p{patch.center.r + dr, patch.center.c + dc};
                    if (!seen.insert({p.r, p.c}).second) continue;
                    tiles[static_cast<int>(patch.at(dr, dc))].push_back(p);
                }
            }
        }
    }

    const AgentState& self(int k) const { return obs.teammates[k]; }
};

// One greedy Chebyshev step toward smaller dist(). Prefers a strict
// improvement; falls back to a random equal-distance sidestep when allowed.
// `keep` pins agents already inside a rectangle to its inside.
template <class DistFn>
Direction pick_step(Plan& p, const AgentState& self, DistFn&& dist, bool sidestep,
                    const Rect* keep = nullptr) {
    const bool pinned = keep && rect_distance(self.pos, *keep) == 0;
    auto ok = [&](Coord to) {
        if (!p.view.walkable(to)) return false;
        if (p.claimed.count({to.r, to.c})) return false;
        if (pinned && rect_distance(to, *keep) > 0) return false;
        return true;
    };
    const int here = dist(self.pos);
    Direction best = Direction::Stay;
    int best_d = here;
    for (Direction d : kCardinalDirections) {
        const Coord to = step(self.pos, d);
        if (!ok(to)) continue;
        const int nd = dist(to);
        if (nd < best_d) {
            best_d = nd;
            best = d;
        }
    }
    if (best == Direction::Stay && sidestep) {
        std::vector<Direction> level;
        for (Direction d : kCardinalDirections) {
            const Coord to = step(self.pos, d);
            if (ok(to) && dist(to) == here) level.push_back(d);
        }
        if (!level.empty()) best = level[p.rng.index(level.size())];
    }
    return best;
}

void set_move(Plan& p, int k, Direction d) {
    p.actions[k].move = d;
    const Coord to = step(p.self(k).pos, d);
    p.claimed.insert({to.r, to.c});
}

void move_toward(Plan& p, int k, Coord goal) {
    auto dist = [&](Coord c) { return chebyshev(c, goal); };
    set_move(p, k, pick_step(p, p.self(k), dist, true, &p.obs.next_fog_safe));
}

void wander(Plan& p, int k) {
    const AgentState& self = p.self(k);
    std::vector<Direction> open;
    for (Direction d : kCardinalDirections) {
        const Coord to = step(self.pos, d);
        if (!p.view.walkable(to) || p.claimed.count({to.r, to.c})) continue;
        if (rect_distance(to, p.obs.next_fog_safe) > 0) continue;
        open.push_back(d);
    }
    if (!open.empty()) set_move(p, k, open[p.rng.index(open.size())]);
}

// Outside the safe rectangle every step must close on it; pre-empt the next
// shrink once back inside.
bool fog_flee(Plan& p, int k) {
    const AgentState& self = p.self(k);
    const Rect& target =
        rect_distance(self.pos, p.obs.fog_safe) > 0 ? p.obs.fog_safe : p.obs.next_fog_safe;
    if (rect_distance(self.pos, target) == 0) return false;
    auto dist = [&](Coord c) { return rect_distance(c, target); };
    set_move(p, k, pick_step(p, self, dist, true));
    return true;
}

// Poultice below half health, Ration below half a bar. Claims use_slot.
bool survival_use(Plan& p, int k) {
    const AgentState& self = p.self(k);
    if (self.hp < 50) {
        const int slot = find_item_slot(self, ItemKind::Poultice);
        if (slot >= 0) {
            p.actions[k].use_slot = slot;
            return true;
        }
    }
    if (self.food_half < 100 || self.water_half < 100) {
        const int slot = find_item_slot(self, ItemKind::Ration);
        if (slot >= 0) {
            p.actions[k].use_slot = slot;
            return true;
        }
    }
    return false;
}

enum class Shore { Unknown, Dry, Water, Fish };

// What the harvest pass would drink or fish from this tile: the first
// cardinal neighbor that is water-like, in engine order.
Shore shore_kind(const Plan& p, Coord t) {
    for (Direction d : kCardinalDirections) {
        const auto k = p.view.tile(step(t, d));
        if (!k) return Shore::Unknown;
        if (*k == TerrainKind::Water) return Shore::Water;
        if (*k == TerrainKind::Fish) return Shore::Fish;
    }
    return Shore::Dry;
}

bool goal_tile_open(const Plan& p, Coord t) {
    return p.view.walkable(t) && !p.occupied.count({t.r, t.c}) &&
           rect_distance(t, p.obs.next_fog_safe) == 0;
}

// Nearest standing-harvest tile of the given kind (Ore, Tree, Crystal,
// Herb, Forest). Scrubs out occupied and fog-doomed tiles.
std::optional<Coord> nearest_ground_goal(const Plan& p, Coord from, TerrainKind kind) {
    std::optional<Coord> best;
    int best_d = INT_MAX;
    for (Coord t : p.tiles[static_cast<int>(kind)]) {
        if (!goal_tile_open(p, t)) continue;
        const int d = chebyshev(from, t);
        if (d < best_d) {
            best_d = d;
            best = t;
        }
    }
    return best;
}

// Nearest tile whose arrival harvests the wanted shoreline: Fish for
// fishing, Water for drinking.
std::optional<Coord> nearest_shore_goal(const Plan& p, Coord from, Shore want) {
    const TerrainKind src = want == Shore::Fish ? TerrainKind::Fish : TerrainKind::Water;
    std::optional<Coord> best;
    int best_d = INT_MAX;
    for (Coord w : p.tiles[static_cast<int>(src)]) {
        for (Direction d : kCardinalDirections) {
            const Coord t = step(w, d);
            if (!goal_tile_open(p, t)) continue;
            if (shore_kind(p, t) != want) continue;
            const int dist = chebyshev(from, t);
            if (dist < best_d) {
                best_d = dist;
                best = t;
            }
        }
    }
    return best;
}

// Hungry or thirsty agents break off and refill; bars refill on arrival.
bool forage_move(Plan& p, int k) {
    const AgentState& self = p.self(k);
    std::optional<Coord> goal;
    if (self.water_half < 80 && self.water_half <= self.food_half) {
        goal = nearest_shore_goal(p, self.pos, Shore::Water);
    }
    if (!goal && self.food_half < 80) {
        goal = nearest_ground_goal(p, self.pos, TerrainKind::Forest);
    }
    if (!goal && self.water_half < 80) {
        goal = nearest_shore_goal(p, self.pos, Shore::Water);
    }
    if (!goal) return false;
    move_toward(p, k, *goal);
    return true;
}

const VisibleEntity* visible_by_id(const TeamObservation& obs, int entity_id) {
    for (const VisibleEntity& v : obs.visible) {
        if (v.entity_id == entity_id) return &v;
    }
    return nullptr;
}

template <class Pred>
const VisibleEntity* nearest_visible(const Plan& p, Coord from, Pred&& pred) {
    const VisibleEntity* best = nullptr;
    int best_d = INT_MAX;
    for (const VisibleEntity& v : p.obs.visible) {
        if (!pred(v)) continue;
        const int d = chebyshev(from, v.pos);
        if (d < best_d) {
            best_d = d;
            best = &v;
        }
    }
    return best;
}

// Agents first, NPCs as a fallback.
const VisibleEntity* nearest_enemy(const Plan& p, Coord from) {
    const VisibleEntity* t =
        nearest_visible(p, from, [](const VisibleEntity& v) { return !v.is_npc; });
    if (!t) t = nearest_visible(p, from, [](const VisibleEntity& v) { return v.is_npc; });
    return t;
}

// NPCs take damage as unarmored melee defenders, so counter melee.
AttackStyle style_versus(const VisibleEntity& v) {
    return dominant_style_against(v.is_npc ? AttackStyle::Melee : v.main_style);
}

void set_attack(Plan& p, int k, const VisibleEntity& v, AttackStyle style) {
    if (chebyshev(p.self(k).pos, v.pos) > kVisionRadius) return;
    p.actions[k].attack = AttackCmd{v.entity_id, style};
}

// Best strictly-better usable upgrade in the inventory. Claims use_slot.
template <class Allow>
bool equip_upgrade(Plan& p, int k, Allow&& allow) {
    const AgentState& self = p.self(k);
    int best_slot = -1;
    int best_gain = 0;
    for (std::size_t i = 0; i < self.inventory.size(); ++i) {
        const ItemStack& it = self.inventory[i];
        if (item_category(it.kind) == ItemCategory::Consumable) continue;
        if (!allow(it.kind)) continue;
        if (!gear_usable(p.cfg, self, it)) continue;
        const int gain = it.level - equipped_level(self.equipment, it.kind);
        if (gain > best_gain) {
            best_gain = gain;
            best_slot = static_cast<int>(i);
        }
    }
    if (best_slot < 0) return false;
    p.actions[k].use_slot = best_slot;
    return true;
}

// Listings a fighter would pay for, cheapest first (the window is already
// price-sorted). Skips own-team listings and respects gold and room.
void buy_upgrade(Plan& p, int k, std::set<int>& taken) {
    const AgentState& self = p.self(k);
    const AttackStyle main = self.main_style(p.cfg);
    const int main_level = self.level(style_skill(main), p.cfg);
    for (std::size_t i = 0; i < p.obs.market_window.size(); ++i) {
        if (taken.count(static_cast<int>(i))) continue;
        const MarketEntry& e = p.obs.market_window[i];
        if (e.seller / kTeamSize == p.obs.team_id) continue;
        if (e.price > self.gold) continue;
        if (inventory_slot_for(self.inventory, e.kind, e.level) < 0) continue;
        bool useful = false;
        switch (item_category(e.kind)) {
            case ItemCategory::Consumable:
                useful = count_items(self, e.kind) < 2;
                break;
            case ItemCategory::Weapon:
                useful = e.kind == weapon_for_style(main) && e.level <= main_level &&
                         e.level > equipped_level(self.equipment, e.kind);
                break;
            case ItemCategory::Armor:
                useful = e.level <= main_level &&
                         e.level > equipped_level(self.equipment, e.kind);
                break;
            case ItemCategory::Ammunition:
                useful = e.kind == ammo_for_style(main) && e.level <= main_level &&
                         count_items(self, e.kind) < 10;
                break;
            case ItemCategory::Tool:
                break;
        }
        if (!useful) continue;
        p.actions[k].buy_index = static_cast<int>(i);
        taken.insert(static_cast<int>(i));
        return;
    }
}

void list_slot(Plan& p, int k, int slot, int level) {
    p.actions[k].sell = SellCmd{slot, std::max(1, level)};
}

// Surplus for a fighter: gear that no longer beats what is worn, extra
// consumables, ammo of the wrong style.
void sell_surplus_gear(Plan& p, int k) {
    const AgentState& self = p.self(k);
    const AttackStyle main = self.main_style(p.cfg);
    for (std::size_t i = 0; i < self.inventory.size(); ++i) {
        const ItemStack& it = self.inventory[i];
        bool spare = false;
        switch (item_category(it.kind)) {
            case ItemCategory::Consumable:
                spare = count_items(self, it.kind) > 2;
                break;
            case ItemCategory::Weapon:
            case ItemCategory::Armor:
                spare = it.level <= equipped_level(self.equipment, it.kind);
                break;
            case ItemCategory::Ammunition:
                spare = it.kind != ammo_for_style(main);
                break;
            case ItemCategory::Tool:
                spare = true;  // fighters have no profession to tool up
                break;
        }
        if (spare) {
            list_slot(p, k, static_cast<int>(i), it.level);
            return;
        }
    }
}

// ---- mixture: one agent per skill ----------------------------------------

void mixture_fighter(Plan& p, int k) {
    const AgentState& self = p.self(k);
    const AttackStyle style = static_cast<AttackStyle>(k);
    if (!p.actions[k].use_slot) {
        equip_upgrade(p, k, [&](ItemKind kind) {
            return kind == weapon_for_style(style) || kind == ammo_for_style(style);
        });
    }
    const VisibleEntity* target = nullptr;
    for (const VisibleEntity& v : p.obs.visible) {
        if (!v.is_npc) continue;
        if (!target || v.npc_level < target->npc_level ||
            (v.npc_level == target->npc_level &&
             chebyshev(self.pos, v.pos) < chebyshev(self.pos, target->pos))) {
            target = &v;
        }
    }
    if (!target) {
        wander(p, k);
        return;
    }
    set_attack(p, k, *target, style);  // train own style, ignore the counter
    if (chebyshev(self.pos, target->pos) > 2) {
        move_toward(p, k, target->pos);
    }
}

void mixture_gatherer(Plan& p, int k) {
    const AgentState& self = p.self(k);
    const SkillKind profession = static_cast<SkillKind>(k);
    if (!p.actions[k].use_slot) {
        equip_upgrade(p, k, [&](ItemKind kind) {
            return tool_profession(kind) == profession;
        });
    }
    if (!p.actions[k].use_slot && !p.actions[k].sell) {
        const ItemKind product = profession == SkillKind::Prospecting ? ItemKind::Shaving
                                 : profession == SkillKind::Carving   ? ItemKind::Scrap
                                 : profession == SkillKind::Alchemy   ? ItemKind::Shard
                                 : profession == SkillKind::Herbalism ? ItemKind::Ration
                                                                      : ItemKind::Poultice;
        for (std::size_t i = 0; i < self.inventory.size(); ++i) {
            const ItemStack& it = self.inventory[i];
            if (it.kind == product && count_items(self, product) > 2) {
                list_slot(p, k, static_cast<int>(i), it.level);
                break;
            }
        }
    }
    std::optional<Coord> goal;
    switch (profession) {
        case SkillKind::Fishing:
            goal = nearest_shore_goal(p, self.pos, Shore::Fish);
            break;
        case SkillKind::Herbalism:
            goal = nearest_ground_goal(p, self.pos, TerrainKind::Herb);
            break;
        case SkillKind::Prospecting:
            goal = nearest_ground_goal(p, self.pos, TerrainKind::Ore);
            break;
        case SkillKind::Carving:
            goal = nearest_ground_goal(p, self.pos, TerrainKind::Tree);
            break;
        default:
            goal = nearest_ground_goal(p, self.pos, TerrainKind::Crystal);
            break;
    }
    if (goal) {
        move_toward(p, k, *goal);
    } else {
        wander(p, k);
    }
}

void mixture_agent(Plan& p, int k) {
    survival_use(p, k);
    if (fog_flee(p, k)) return;
    if (forage_move(p, k)) return;
    if (k < 3) {
        mixture_fighter(p, k);
    } else {
        mixture_gatherer(p, k);
    }
}

// ---- combat and the stage-2 styles ---------------------------------------

// Pure aggression: pick a target, counter its style, close in. No item
// actions at all; food comes from whatever tiles the chase crosses.
void combat_agent(Plan& p, int k, const VisibleEntity* forced) {
    const AgentState& self = p.self(k);
    if (fog_flee(p, k)) return;
    const VisibleEntity* target = forced ? forced : nearest_enemy(p, self.pos);
    if (!target) {
        if (forage_move(p, k)) return;
        auto dist = [&](Coord c) { return chebyshev(c, rect_center(p.obs.fog_safe)); };
        set_move(p, k, pick_step(p, p.self(k), dist, true, &p.obs.next_fog_safe));
        return;
    }
    set_attack(p, k, *target, style_versus(*target));
    if (forage_move(p, k)) return;
    if (chebyshev(self.pos, target->pos) > 3) {
        move_toward(p, k, target->pos);
    } else {
        wander(p, k);
    }
}

void reckless_economy(Plan& p, int k, std::set<int>& taken) {
    if (!p.actions[k].use_slot) {
        equip_upgrade(p, k, [](ItemKind) { return true; });
    }
    buy_upgrade(p, k, taken);
    if (!p.actions[k].buy_index && !p.actions[k].use_slot) {
        sell_surplus_gear(p, k);
    }
}

void reckless_agent(Plan& p, int k, std::set<int>& taken) {
    survival_use(p, k);
    reckless_economy(p, k, taken);
    combat_agent(p, k, nullptr);
}

void ruthless_agent(Plan& p, int k, std::set<int>& taken, const VisibleEntity* focus,
                    Coord centroid, bool first_alive) {
    survival_use(p, k);
    reckless_economy(p, k, taken);
    const AgentState& self = p.self(k);
    if (focus && first_alive && !focus->is_npc) {
        p.actions[k].comm = focus->entity_id;  // call the target
    }
    if (fog_flee(p, k)) return;
    if (focus) set_attack(p, k, *focus, style_versus(*focus));
    if (forage_move(p, k)) return;
    if (chebyshev(self.pos, centroid) > 6) {
        move_toward(p, k, centroid);  // regroup
        return;
    }
    if (focus) {
        if (chebyshev(self.pos, focus->pos) > 3) {
            move_toward(p, k, focus->pos);
        } else {
            wander(p, k);
        }
        return;
    }
    auto dist = [&](Coord c) { return chebyshev(c, rect_center(p.obs.fog_safe)); };
    set_move(p, k, pick_step(p, self, dist, true, &p.obs.next_fog_safe));
}

// Risk-averse forager: works the safe rectangle's rim, touches nothing it
// cannot beat, and never swings at other agents (their skill levels are not
// public, so "weaker" is unknowable).
void coward_agent(Plan& p, int k) {
    survival_use(p, k);
    if (fog_flee(p, k)) return;
    const AgentState& self = p.self(k);
    const int own_combat = self.level(SkillKind::Melee, p.cfg) +
                           self.level(SkillKind::Range, p.cfg) +
                           self.level(SkillKind::Mage, p.cfg);
    const VisibleEntity* prey = nearest_visible(p, self.pos, [&](const VisibleEntity& v) {
        return v.is_npc && 3 * v.npc_level < own_combat;
    });
    if (prey) set_attack(p, k, *prey, style_versus(*prey));
    if (forage_move(p, k)) return;

    std::optional<Coord> goal;
    int best_score = INT_MAX;
    for (TerrainKind kind : {TerrainKind::Ore, TerrainKind::Tree, TerrainKind::Crystal,
                             TerrainKind::Herb, TerrainKind::Forest}) {
        for (Coord t : p.tiles[static_cast<int>(kind)]) {
            if (!goal_tile_open(p, t)) continue;
            const int score =
                chebyshev(self.pos, t) + 3 * rect_edge_distance(t, p.obs.next_fog_safe);
            if (score < best_score) {
                best_score = score;
                goal = t;
            }
        }
    }
    if (goal) {
        move_toward(p, k, *goal);
        return;
    }
    if (rect_edge_distance(self.pos, p.obs.next_fog_safe) > 2) {
        // drift to the rim
        Coord edge{std::clamp(self.pos.r, p.obs.next_fog_safe.lo_r, p.obs.next_fog_safe.hi_r),
                   std::clamp(self.pos.c, p.obs.next_fog_safe.lo_c, p.obs.next_fog_safe.hi_c)};
        const Rect& r = p.obs.next_fog_safe;
        const int dn = edge.r - r.lo_r;
        const int ds = r.hi_r - edge.r;
        const int dw = edge.c - r.lo_c;
        const int de = r.hi_c - edge.c;
        const int m = std::min({dn, ds, dw, de});
        if (m == dn) {
            edge.r = r.lo_r;
        } else if (m == ds) {
            edge.r = r.hi_r;
        } else if (m == dw) {
            edge.c = r.lo_c;
        } else {
            edge.c = r.hi_c;
        }
        move_toward(p, k, edge);
        return;
    }
    wander(p, k);
}

// ---- the dispatching policy classes --------------------------------------

enum class Builtin { Mixture, Combat, Reckless, Ruthless, Coward, Stay };

class BuiltinPolicy final : public TeamPolicy {
  public:
    explicit BuiltinPolicy(Builtin kind, std::string name)
        : kind_(kind), name_(std::move(name)) {}

    std::string name() const override { return name_; }

    TeamActions act(const TeamObservation& obs, std::uint64_t seed) override {
        Rng rng(seed);
        Plan p(cfg_, obs, rng);
        if (kind_ == Builtin::Stay) return p.actions;

        const VisibleEntity* focus = nullptr;
        Coord centroid{0, 0};
        int first_alive = -1;
        if (kind_ == Builtin::Ruthless) {
            int n = 0;
            long long sr = 0;
            long long sc = 0;
            for (int k = 0; k < kTeamSize; ++k) {
                if (!obs.teammates[k].alive) continue;
                if (first_alive < 0) first_alive = k;
                sr += obs.teammates[k].pos.r;
                sc += obs.teammates[k].pos.c;
                ++n;
            }
            if (n > 0) {
                centroid = {static_cast<int>(sr / n), static_cast<int>(sc / n)};
            }
            focus = nearest_enemy(p, centroid);
        }

        std::set<int> taken;  // market-window indices claimed by teammates
        for (int k = 0; k < kTeamSize; ++k) {
            if (!obs.teammates[k].alive) continue;
            switch (kind_) {
                case Builtin::Mixture: mixture_agent(p, k); break;
                case Builtin::Combat: combat_agent(p, k, nullptr); break;
                case Builtin::Reckless: reckless_agent(p, k, taken); break;
                case Builtin::Ruthless:
                    ruthless_agent(p, k, taken, focus, centroid, k == first_alive);
                    break;
                case Builtin::Coward: coward_agent(p, k); break;
                case Builtin::Stay: break;
            }
        }
        legalize(cfg_, obs, p.actions);
        return p.actions;
    }

  private:
    Builtin kind_;
    std::string name_;
};

// ---- external controllers over the line protocol -------------------------

class ExternalPolicy final : public TeamPolicy {
  public:
    explicit ExternalPolicy(std::string command) : command_(std::move(command)) {}

    ~ExternalPolicy() override { shutdown(); }

    std::string name() const override { return "ext:" + command_; }
    bool deterministic() const override { return false; }

    TeamActions act(const TeamObservation& obs, std::uint64_t) override {
        TeamActions actions{};
        if (!ensure_started()) return actions;
        drain_stale();
        if (!write_line(observation_to_json(obs))) return actions;
        std::string reply;
        if (!read_line(reply, kReplyTimeoutMs)) return actions;  // silence = Stay
        actions = actions_from_json(reply);
        legalize(cfg_, obs, actions);
        return actions;
    }

  private:
    static constexpr int kReplyTimeoutMs = 100;

    bool ensure_started() {
        if (broken_) return false;
        if (pid_ > 0) return true;
        ::signal(SIGPIPE, SIG_IGN);
        int to_child[2];
        int from_child[2];
        if (::pipe(to_child) != 0) {
            broken_ = true;
            return false;
        }
        if (::pipe(from_child) != 0) {
            ::close(to_child[0]);
            ::close(to_child[1]);
            broken_ = true;
            return false;
        }
        pid_ = ::fork();
        if (pid_ < 0) {
            for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) {
                ::close(fd);
            }
            broken_ = true;
            return false;
        }
        if (pid_ == 0) {
            ::setpgid(0, 0);  // own group, so shutdown can reach grandchildren
            ::dup2(to_child[0], STDIN_FILENO);
            ::dup2(from_child[1], STDOUT_FILENO);
            for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) {
                ::close(fd);
            }
            ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
            ::_exit(127);
        }
        ::setpgid(pid_, pid_);
        ::close(to_child[0]);
        ::close(from_child[1]);
        stdin_fd_ = to_child[1];
        stdout_fd_ = from_child[0];
        return true;
    }

    bool write_line(const std::string& payload) {
        std::string line = payload;
        line.push_back('\n');
        std::size_t off = 0;
        while (off < line.size()) {
            struct pollfd pfd{stdin_fd_, POLLOUT, 0};
            if (::poll(&pfd, 1, kReplyTimeoutMs) <= 0) return false;
            const ssize_t n = ::write(stdin_fd_, line.data() + off, line.size() - off);
            if (n <= 0) {
                if (n < 0 && (errno == EAGAIN || errno == EINTR)) continue;
                broken_ = true;
                return false;
            }
            off += static_cast<std::size_t>(n);
        }
        return true;
    }

    // A late reply from an earlier tick would shift every later reply by
    // one observation; toss anything already buffered before asking again.
    void drain_stale() {
        for (;;) {
            const std::size_t nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                buffer_.erase(0, nl + 1);
                continue;
            }
            struct pollfd pfd{stdout_fd_, POLLIN, 0};
            if (::poll(&pfd, 1, 0) <= 0) return;
            char chunk[4096];
            const ssize_t n = ::read(stdout_fd_, chunk, sizeof chunk);
            if (n <= 0) {
                if (n == 0) broken_ = true;
                return;
            }
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

    bool read_line(std::string& out, int budget_ms) {
        for (;;) {
            const std::size_t nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                out = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                return true;
            }
            if (budget_ms <= 0) return false;
            struct pollfd pfd{stdout_fd_, POLLIN, 0};
            const int waited = std::min(budget_ms, 10);
            const int r = ::poll(&pfd, 1, waited);
            budget_ms -= waited;
            if (r < 0) return false;
            if (r == 0) continue;
            char chunk[4096];
            const ssize_t n = ::read(stdout_fd_, chunk, sizeof chunk);
            if (n <= 0) {
                broken_ = true;
                return false;
            }
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

    void shutdown() {
        if (stdin_fd_ >= 0) ::close(stdin_fd_);
        if (stdout_fd_ >= 0) ::close(stdout_fd_);
        stdin_fd_ = stdout_fd_ = -1;
        if (pid_ > 0) {
            ::kill(-pid_, SIGTERM);
            int status = 0;
            for (int i = 0; i < 20; ++i) {
                if (::waitpid(pid_, &status, WNOHANG) == pid_) {
                    pid_ = -1;
                    return;
                }
                ::usleep(10000);
            }
            ::kill(-pid_, SIGKILL);
            ::waitpid(pid_, &status, 0);
            pid_ = -1;
        }
    }

    std::string command_;
    pid_t pid_ = -1;
    int stdin_fd_ = -1;
    int stdout_fd_ = -1;
    std::string buffer_;
    bool broken_ = false;
};

}  // namespace

void legalize(const SimConfig& cfg, const TeamObservation& obs, TeamActions& actions) {
    PatchView view{&obs};
    std::set<std::int64_t> listings_taken;
    for (int k = 0; k < kTeamSize; ++k) {
        AgentAction& a = actions[k];
        const AgentState& self = obs.teammates[k];
        if (!self.alive) {
            a = AgentAction{};
            continue;
        }
        if (a.move != Direction::Stay && !view.walkable(step(self.pos, a.move))) {
            a.move = Direction::Stay;
        }
        if (a.attack) {
            const VisibleEntity* v = visible_by_id(obs, a.attack->target);
            if (!v || chebyshev(self.pos, v->pos) > kVisionRadius) a.attack.reset();
        }
        if (a.sell && (a.sell->slot < 0 ||
                       a.sell->slot >= static_cast<int>(self.inventory.size()) ||
                       a.sell->price < 1)) {
            a.sell.reset();
        }
        if (a.use_slot) {
            bool ok = !a.sell &&  // a sale this tick may shift or empty the slot
                      *a.use_slot >= 0 &&
                      *a.use_slot < static_cast<int>(self.inventory.size());
            if (ok) {
                const ItemStack& it = self.inventory[*a.use_slot];
                ok = item_category(it.kind) == ItemCategory::Consumable ||
                     gear_usable(cfg, self, it);
            }
            if (!ok) a.use_slot.reset();
        }
        if (a.buy_index) {
            bool ok = !a.sell && *a.buy_index >= 0 &&
                      *a.buy_index < static_cast<int>(obs.market_window.size());
            if (ok) {
                const MarketEntry& e = obs.market_window[*a.buy_index];
                ok = e.seller != self.agent_id && self.gold >= e.price &&
                     inventory_slot_for(self.inventory, e.kind, e.level) >= 0 &&
                     listings_taken.insert(e.listing_id).second;
            }
            if (!ok) a.buy_index.reset();
        }
        if (a.comm && (*a.comm < 0 || *a.comm >= kCommTokens)) {
            a.comm.reset();
        }
    }
}

TeamActions actions_from_json(const std::string& line) {
    TeamActions out{};
    try {
        const nlohmann::json j = nlohmann::json::parse(line);
        if (!j.contains("actions") || !j["actions"].is_array()) return out;
        const auto& arr = j["actions"];
        for (std::size_t k = 0; k < out.size() && k < arr.size(); ++k) {
            const auto& e = arr[k];
            if (!e.is_object()) continue;
            AgentAction& a = out[k];
            if (e.contains("move") && e["move"].is_string()) {
                const std::string m = e["move"].get<std::string>();
                for (Direction d : {Direction::North, Direction::South, Direction::East,
                                    Direction::West, Direction::Stay}) {
                    if (m == direction_name(d)) a.move = d;
                }
            }
            if (e.contains("attack") && e["attack"].is_object()) {
                const auto& atk = e["attack"];
                AttackCmd cmd;
                cmd.target = atk.value("target", -1);
                const std::string style = atk.value("style", "melee");
                for (int s = 0; s < 3; ++s) {
                    if (style == kStyleNames[s]) cmd.style = static_cast<AttackStyle>(s);
                }
                a.attack = cmd;
            }
            if (e.contains("use") && e["use"].is_number_integer()) {
                a.use_slot = e["use"].get<int>();
            }
            if (e.contains("sell") && e["sell"].is_object()) {
                a.sell = SellCmd{e["sell"].value("slot", -1),
                                 e["sell"].value("price", std::int64_t{0})};
            }
            if (e.contains("buy") && e["buy"].is_number_integer()) {
                a.buy_index = e["buy"].get<int>();
            }
            if (e.contains("comm") && e["comm"].is_number_integer()) {
                a.comm = e["comm"].get<int>();
            }
        }
    } catch (const std::exception&) {
        return TeamActions{};
    }
    return out;
}

std::unique_ptr<TeamPolicy> make_policy(const std::string& spec) {
    if (spec == "mixture") {
        return std::make_unique<BuiltinPolicy>(Builtin::Mixture, spec);
    }
    if (spec == "combat") {
        return std::make_unique<BuiltinPolicy>(Builtin::Combat, spec);
    }
    if (spec == "reckless") {
        return std::make_unique<BuiltinPolicy>(Builtin::Reckless, spec);
    }
    if (spec == "ruthless") {
        return std::make_unique<BuiltinPolicy>(Builtin::Ruthless, spec);
    }
    if (spec == "coward") {
        return std::make_unique<BuiltinPolicy>(Builtin::Coward, spec);
    }
    if (spec == "stay") {
        return std::make_unique<BuiltinPolicy>(Builtin::Stay, spec);
    }
    if (spec.rfind("ext:", 0) == 0) {
        return std::make_unique<ExternalPolicy>(spec.substr(4));
    }
    throw std::invalid_argument("unknown policy: " + spec);
}

}  // namespace arena
