#include "arena/engine.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "arena/combat.hpp"
#include "arena/hash.hpp"

namespace arena {
namespace {

constexpr std::uint64_t kStreamMatch = 4;

}  // namespace

Rect Sim::rect_from_inset(int inset, int size) {
    const int center_lo = (size - 1) / 2;
    const int center_hi = size / 2;
    const int lo = std::min(inset, center_lo);
    const int hi = std::max(size - 1 - inset, center_hi);
    return {lo, lo, hi, hi};
}

int Sim::fog_inset_at(int tick, const SimConfig& cfg) {
    if (tick < cfg.fog_start_tick) return 0;
    return (tick - cfg.fog_start_tick) / cfg.fog_shrink_interval + 1;
}

Rect Sim::fog_rect(int tick, int size, const SimConfig& cfg) {
    return rect_from_inset(fog_inset_at(tick, cfg), size);
}

int Sim::fog_damage_at(Coord pos, const Rect& safe, const SimConfig& cfg) {
    return cfg.fog_damage_per_tile * safe.distance(pos);
}

Sim::Sim(const SimConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), rng_(derive_seed(seed, kStreamMatch)) {
    cfg_.validate();
    MapGenConfig map_cfg = cfg_.map;
    map_cfg.seed = seed;

    world_.seed = seed;
    world_.map = generate_map(map_cfg);
    world_.occupancy.assign(static_cast<std::size_t>(map_cfg.size) * map_cfg.size, -1);

    const SpawnPlan plan = spawn_positions(seed, world_.map);
    world_.agents.resize(kAgentCount);
    for (int t = 0; t < kTeamCount; ++t) {
        for (int k = 0; k < kTeamSize; ++k) {
            AgentState& a = world_.agents[t * kTeamSize + k];
            a.agent_id = t * kTeamSize + k;
            a.team_id = t;
            a.pos = plan.team_slots[t][k];
            world_.occupancy[a.pos.r * map_cfg.size + a.pos.c] = a.agent_id;
        }
    }

    const auto npc_spawns = npc_placement(seed, world_.map, map_cfg.npc_count);
    world_.npcs.reserve(npc_spawns.size());
    for (std::size_t i = 0; i < npc_spawns.size(); ++i) {
        NpcState npc;
        npc.npc_id = kAgentCount + static_cast<int>(i);
        npc.pos = npc_spawns[i].pos;
        npc.type = npc_spawns[i].type;
        npc.level = npc_spawns[i].level;
        npc.hp = npc.max_hp(cfg_);
        world_.npcs.push_back(npc);
        world_.occupancy[npc.pos.r * map_cfg.size + npc.pos.c] = npc.npc_id;
    }

    build_observations();
}

void Sim::push(Event e) {
    e.tick = world_.tick;
    events_.push_back(e);
}

int Sim::alive_team_count() const {
    std::array<bool, kTeamCount> alive{};
    for (const AgentState& a : world_.agents) {
        if (a.alive) alive[a.team_id] = true;
    }
    int n = 0;
    for (bool b : alive) n += b;
    return n;
}

std::pair<std::size_t, std::size_t> Sim::step(const MatchActions& actions) {
    const std::size_t begin = events_.size();
    if (world_.terminal) return {begin, begin};
    tick_starts_.push_back(begin);

    validate_actions(actions);
    stage_comm();
    stage_sell();
    stage_buy();
    stage_use();
    stage_attack();
    stage_move();
    stage_harvest();
    stage_npc();
    stage_metabolism_and_fog();
    stage_deaths();
    stage_respawn();

    if (world_.tick + 1 >= cfg_.horizon || alive_team_count() <= 1) {
        world_.terminal = true;
        finalize_match();
    }
    world_.tick += 1;
    build_observations();
    return {begin, events_.size()};
}

std::pair<std::size_t, std::size_t> Sim::tick_events(int tick) const {
    if (tick < 0 || tick >= static_cast<int>(tick_starts_.size())) {
        return {events_.size(), events_.size()};
    }
    const std::size_t begin = tick_starts_[tick];
    const std::size_t end = tick + 1 < static_cast<int>(tick_starts_.size())
                                ? tick_starts_[tick + 1]
                                : events_.size();
    return {begin, end};
}

void Sim::validate_actions(const MatchActions& actions) {
    for (int id = 0; id < kAgentCount; ++id) {
        PendingAction& p = pending_[id];
        p = PendingAction{};
        const AgentState& agent = world_.agents[id];
        if (!agent.alive) continue;
        const AgentAction& act = actions[id / kTeamSize][id % kTeamSize];
        p.action = act;

        if (act.move != Direction::Stay) {
            const Coord to = arena::step(agent.pos, act.move);
            if (!world_.map.passable(to)) {
                p.action.move = Direction::Stay;
                push({.kind = EventKind::Masked, .actor = id, .pos = to,
                      .aux = static_cast<int>(MaskReason::BadMove)});
            }
        }

        if (act.attack) {
            const int target = act.attack->target;
            bool ok = target >= 0 &&
                      target < kAgentCount + static_cast<int>(world_.npcs.size());
            if (ok) {
                Coord tpos;
                if (is_npc_id(target)) {
                    const NpcState& npc = world_.npcs[target - kAgentCount];
                    ok = npc.alive && npc.hp > 0;
                    tpos = npc.pos;
                } else {
                    const AgentState& other = world_.agents[target];
                    ok = other.alive && other.hp > 0 && other.team_id != agent.team_id;
                    tpos = other.pos;
                }
                ok = ok && chebyshev(agent.pos, tpos) <= kVisionRadius;
            }
            if (ok) {
                p.has_attack = true;
            } else {
                push({.kind = EventKind::Masked, .actor = id,
                      .aux = static_cast<int>(MaskReason::BadAttack)});
            }
        }

        if (act.use_slot) {
            std::string why;
            if (!use_allowed(agent, *act.use_slot, why)) {
                push({.kind = EventKind::Masked, .actor = id,
                      .aux = static_cast<int>(MaskReason::BadUse)});
            } else {
                p.has_use = true;
            }
        }

        if (act.sell) {
            const bool ok = act.sell->slot >= 0 &&
                            act.sell->slot < static_cast<int>(agent.inventory.size()) &&
                            act.sell->price >= 1;
            if (ok) {
                p.has_sell = true;
            } else {
                push({.kind = EventKind::Masked, .actor = id,
                      .aux = static_cast<int>(MaskReason::BadSell)});
            }
        }

        if (act.buy_index) {
            int detail = 0;
            const int idx = *act.buy_index;
            const Listing* listing = nullptr;
            if (idx < 0 || idx >= static_cast<int>(world_.market_window_ids.size())) {
                detail = 1;
            } else {
                listing = world_.market.find(world_.market_window_ids[idx]);
                if (!listing) {
                    detail = 1;
                } else if (listing->seller == id) {
                    detail = 2;
                } else if (agent.gold < listing->price) {
                    detail = 3;
                } else if (inventory_slot_for(agent.inventory, listing->item.kind,
                                              listing->item.level) < 0) {
                    detail = 4;
                }
            }
            if (detail == 0) {
                p.buy_listing = listing->listing_id;
            } else {
                push({.kind = EventKind::Masked, .actor = id, .value = detail,
                      .aux = static_cast<int>(MaskReason::BadBuy)});
            }
        }

        if (act.comm && (*act.comm < 0 || *act.comm >= kCommTokens)) {
            p.action.comm.reset();
            push({.kind = EventKind::Masked, .actor = id,
                  .aux = static_cast<int>(MaskReason::BadComm)});
        }
    }
}

bool Sim::use_allowed(const AgentState& agent, int slot, std::string& why) const {
    if (slot < 0 || slot >= static_cast<int>(agent.inventory.size())) {
        why = "empty slot";
        return false;
    }
    const ItemStack& item = agent.inventory[slot];
    const ItemCategory cat = item_category(item.kind);
    if (cat == ItemCategory::Consumable) return true;
    SkillKind gate;
    if (cat == ItemCategory::Weapon || cat == ItemCategory::Ammunition) {
        gate = style_skill(*item_style(item.kind));
    } else if (cat == ItemCategory::Tool) {
        gate = *tool_profession(item.kind);
    } else {  // armor is gated by the agent's main combat skill
        gate = style_skill(agent.main_style(cfg_));
    }
    if (agent.level(gate, cfg_) < item.level) {
        why = "level gate";
        return false;
    }
    return true;
}

void Sim::stage_comm() {
    for (int id = 0; id < kAgentCount; ++id) {
        AgentState& agent = world_.agents[id];
        if (!agent.alive || !pending_[id].action.comm) continue;
        agent.comm_token = *pending_[id].action.comm;
        agent.comm_tick = world_.tick;
        push({.kind = EventKind::Comm, .actor = id, .pos = agent.pos,
              .value = agent.comm_token});
    }
}

void Sim::stage_sell() {
    for (int id = 0; id < kAgentCount; ++id) {
        if (!pending_[id].has_sell) continue;
        AgentState& agent = world_.agents[id];
        const SellCmd cmd = *pending_[id].action.sell;
        ItemStack& stack = agent.inventory[cmd.slot];
        const ItemKind kind = stack.kind;
        const int level = stack.level;
        if (--stack.quantity == 0) {
            agent.inventory.erase(agent.inventory.begin() + cmd.slot);
        }
        const std::int64_t lid = world_.market.list(id, kind, level, cmd.price);
        push({.kind = EventKind::List, .actor = id, .value = cmd.price, .item = kind,
              .item_level = level, .quantity = 1, .aux = static_cast<int>(lid)});
    }
}

void Sim::stage_buy() {
    for (int id = 0; id < kAgentCount; ++id) {
        const std::int64_t lid = pending_[id].buy_listing;
        if (lid < 0) continue;
        AgentState& buyer = world_.agents[id];
        const Listing* listing = world_.market.find(lid);
        int detail = 0;
        if (!listing) {
            detail = 5;
        } else if (buyer.gold < listing->price) {
            detail = 3;
        } else if (inventory_slot_for(buyer.inventory, listing->item.kind,
                                      listing->item.level) < 0) {
            detail = 4;
        }
        if (detail != 0) {
            push({.kind = EventKind::Masked, .actor = id, .value = detail,
                  .aux = static_cast<int>(MaskReason::BadBuy)});
            continue;
        }
        const Listing bought = *listing;
        world_.market.erase(lid);
        buyer.gold -= bought.price;
        world_.agents[bought.seller].gold += bought.price;
        inventory_add(buyer.inventory, bought.item.kind, bought.item.level, 1);
        push({.kind = EventKind::Buy, .actor = id, .target = bought.seller,
              .value = bought.price, .item = bought.item.kind,
              .item_level = bought.item.level, .quantity = 1,
              .aux = static_cast<int>(lid)});
    }
}

void Sim::stage_use() {
    for (int id = 0; id < kAgentCount; ++id) {
        if (!pending_[id].has_use) continue;
        AgentState& agent = world_.agents[id];
        const int slot = *pending_[id].action.use_slot;
        std::string why;
        // Re-check: the agent's own sell this tick may have shifted slots.
        if (!use_allowed(agent, slot, why)) {
            push({.kind = EventKind::Masked, .actor = id,
                  .aux = static_cast<int>(MaskReason::BadUse)});
            continue;
        }
        ItemStack& stack = agent.inventory[slot];
        if (item_category(stack.kind) == ItemCategory::Consumable) {
            const int points = cfg_.consumable_restore_per_level * stack.level;
            if (stack.kind == ItemKind::Ration) {
                agent.food_half = std::min(200, agent.food_half + 2 * points);
                agent.water_half = std::min(200, agent.water_half + 2 * points);
            } else {
                agent.hp = std::min(100, agent.hp + points);
            }
            push({.kind = EventKind::Use, .actor = id, .value = points,
                  .item = stack.kind, .item_level = stack.level, .quantity = 1});
            if (--stack.quantity == 0) {
                agent.inventory.erase(agent.inventory.begin() + slot);
            }
        } else {
            const ItemStack incoming = stack;
            auto& dest = agent.equipment.slot(incoming.kind);
            agent.inventory.erase(agent.inventory.begin() + slot);
            if (dest) {
                agent.inventory.insert(agent.inventory.begin() + slot, *dest);
            }
            dest = incoming;
            push({.kind = EventKind::Equip, .actor = id, .item = incoming.kind,
                  .item_level = incoming.level, .quantity = incoming.quantity,
                  .aux = static_cast<int>(item_category(incoming.kind))});
        }
    }
}

void Sim::stage_attack() {
    for (int id = 0; id < kAgentCount; ++id) {
        if (!pending_[id].has_attack) continue;
        AgentState& attacker = world_.agents[id];
        if (attacker.hp <= 0) continue;  // incapacitated earlier this tick
        const AttackCmd cmd = *pending_[id].action.attack;
        const AttackStyle style = cmd.style;

        int damage = 0;
        Coord tpos;
        if (is_npc_id(cmd.target)) {
            NpcState& npc = world_.npcs[cmd.target - kAgentCount];
            if (!npc.alive || npc.hp <= 0) {
                push({.kind = EventKind::Masked, .actor = id, .target = cmd.target,
                      .value = 1, .aux = static_cast<int>(MaskReason::BadAttack)});
                continue;
            }
            damage = agent_attack_damage(attacker, style, AttackStyle::Melee, 0, cfg_);
            npc.last_hitter = id;
            damage_npc(npc, damage, true);
            tpos = npc.pos;
        } else {
            AgentState& victim = world_.agents[cmd.target];
            if (!victim.alive || victim.hp <= 0) {
                push({.kind = EventKind::Masked, .actor = id, .target = cmd.target,
                      .value = 1, .aux = static_cast<int>(MaskReason::BadAttack)});
                continue;
            }
            damage = agent_attack_damage(attacker, style, victim.main_style(cfg_),
                                         victim.equipment.armor_levels(), cfg_);
            damage_agent(victim, damage, DeathCause::Slain, id);
            tpos = victim.pos;
        }

        auto& ammo = attacker.equipment.ammo;
        if (ammo && item_style(ammo->kind) == style && --ammo->quantity == 0) {
            ammo.reset();
        }
        attacker.xp[static_cast<int>(style_skill(style))] += 1;
        push({.kind = EventKind::Attack, .actor = id, .target = cmd.target, .pos = tpos,
              .value = damage, .style = style});
    }
}

void Sim::stage_move() {
    const int size = world_.map.size();
    for (int id = 0; id < kAgentCount; ++id) {
        AgentState& agent = world_.agents[id];
        if (!agent.alive || agent.hp <= 0) continue;
        const Direction dir = pending_[id].action.move;
        if (dir == Direction::Stay) continue;
        const Coord to = arena::step(agent.pos, dir);
        if (world_.occupancy[to.r * size + to.c] != -1) {
            push({.kind = EventKind::MoveBlocked, .actor = id, .pos = to});
            continue;
        }
        world_.occupancy[agent.pos.r * size + agent.pos.c] = -1;
        world_.occupancy[to.r * size + to.c] = id;
        agent.pos = to;
        pending_[id].arrived = true;
        push({.kind = EventKind::Move, .actor = id, .pos = to});
    }
}

void Sim::stage_harvest() {
    for (int id = 0; id < kAgentCount; ++id) {
        if (!pending_[id].arrived) continue;
        AgentState& agent = world_.agents[id];
        if (agent.hp <= 0) continue;
        const TerrainKind standing = world_.map.kind(agent.pos);
        if (terrain_harvestable(standing) && terrain_passable(standing)) {
            harvest_tile(agent, agent.pos);
        }
        for (Direction d : kCardinalDirections) {
            const Coord q = arena::step(agent.pos, d);
            if (!world_.map.in_bounds(q)) continue;
            const TerrainKind k = world_.map.kind(q);
            if (k == TerrainKind::Water || k == TerrainKind::Fish) {
                harvest_tile(agent, q);
                break;
            }
        }
    }
}

void Sim::harvest_tile(AgentState& agent, Coord tile) {
    Tile& t = world_.map.at(tile);
    const TerrainKind kind = t.kind;
    if (kind == TerrainKind::Forest) {
        agent.food_half = 200;
        push({.kind = EventKind::Harvest, .actor = agent.agent_id, .pos = tile,
              .value = 1});
    } else if (kind == TerrainKind::Water) {
        agent.water_half = 200;
        push({.kind = EventKind::Harvest, .actor = agent.agent_id, .pos = tile,
              .value = 2});
        return;  // water does not degrade
    } else {
        const SkillKind profession = *terrain_profession(kind);
        const ItemKind product = *terrain_product(kind);
        const int level = agent.equipment.tool_level(profession);
        if (!inventory_add(agent.inventory, product, level, 1)) {
            push({.kind = EventKind::HarvestLost, .actor = agent.agent_id, .pos = tile,
                  .item = product, .item_level = level});
            return;  // nothing yielded, tile untouched
        }
        agent.xp[static_cast<int>(profession)] += 1;
        push({.kind = EventKind::Harvest, .actor = agent.agent_id, .pos = tile,
              .item = product, .item_level = level, .quantity = 1,
              .aux = static_cast<int>(profession)});
    }
    t.kind = tile_transition(kind);
    t.respawn_timer = cfg_.resource_respawn_ticks;
    timered_tiles_.push_back(tile);
}

void Sim::stage_npc() {
    for (NpcState& npc : world_.npcs) {
        if (!npc.alive || npc.hp <= 0) continue;

        int nearest = -1;
        int nearest_d = kVisionRadius + 1;
        for (const AgentState& a : world_.agents) {
            if (!a.alive || a.hp <= 0) continue;
            const int d = chebyshev(npc.pos, a.pos);
            if (d < nearest_d) {
                nearest_d = d;
                nearest = a.agent_id;
            }
        }

        switch (npc.type) {
            case NpcType::Passive: {
                if (nearest < 0) break;
                npc_try_move(npc, world_.agents[nearest].pos, /*toward=*/false);
                break;
            }
            case NpcType::Neutral: {
                const int lh = npc.last_hitter;
                if (lh < 0) break;
                const AgentState& target = world_.agents[lh];
                if (target.alive && target.hp > 0 &&
                    chebyshev(npc.pos, target.pos) <= kVisionRadius) {
                    npc_attack(npc, lh);
                }
                break;
            }
            case NpcType::Hostile: {
                if (nearest < 0) break;
                npc_attack(npc, nearest);
                if (nearest_d > 1) {
                    npc_try_move(npc, world_.agents[nearest].pos, /*toward=*/true);
                }
                break;
            }
        }
    }
}

void Sim::npc_attack(NpcState& npc, int victim_id) {
    AgentState& victim = world_.agents[victim_id];
    const AttackStyle main = victim.main_style(cfg_);
    const AttackStyle style = dominant_style_against(main);
    const int damage = npc_attack_damage(npc.level, style, main,
                                         victim.equipment.armor_levels(), cfg_);
    damage_agent(victim, damage, DeathCause::NpcSlain, npc.npc_id);
    push({.kind = EventKind::Attack, .actor = npc.npc_id, .target = victim_id,
          .pos = victim.pos, .value = damage, .style = style});
}

void Sim::npc_try_move(NpcState& npc, Coord target, bool toward) {
    const int size = world_.map.size();
    const int now = chebyshev(npc.pos, target);
    Coord best = npc.pos;
    int best_d = now;
    for (Direction d : kCardinalDirections) {
        const Coord q = arena::step(npc.pos, d);
        if (!world_.map.passable(q) || world_.occupancy[q.r * size + q.c] != -1) continue;
        const int qd = chebyshev(q, target);
        const bool better = toward ? qd < best_d : qd > best_d;
        if (better) {
            best = q;
            best_d = qd;
        }
    }
    if (best == npc.pos) return;
    world_.occupancy[npc.pos.r * size + npc.pos.c] = -1;
    world_.occupancy[best.r * size + best.c] = npc.npc_id;
    npc.pos = best;
}

void Sim::stage_metabolism_and_fog() {
    const int inset = fog_inset_at(world_.tick, cfg_);
    if (inset > world_.fog_inset) {
        world_.fog_inset = inset;
        push({.kind = EventKind::FogShrink, .value = inset});
    }
    const Rect safe = rect_from_inset(inset, world_.map.size());

    for (AgentState& agent : world_.agents) {
        if (!agent.alive || agent.hp <= 0) continue;
        agent.food_half = std::max(0, agent.food_half - cfg_.decay_half_per_tick);
        agent.water_half = std::max(0, agent.water_half - cfg_.decay_half_per_tick);
        int starve = 0;
        if (agent.food_half == 0) starve += cfg_.starve_hp_per_tick;
        if (agent.water_half == 0) starve += cfg_.starve_hp_per_tick;
        if (starve > 0) {
            damage_agent(agent, starve, DeathCause::Starvation, -1);
        } else if (agent.food_half > 2 * cfg_.regen_threshold &&
                   agent.water_half > 2 * cfg_.regen_threshold) {
            agent.hp = std::min(100, agent.hp + cfg_.regen_hp_per_tick);
        }
        if (agent.hp > 0) {
            const int fog = fog_damage_at(agent.pos, safe, cfg_);
            if (fog > 0) damage_agent(agent, fog, DeathCause::Fog, -1);
        }
    }
    for (NpcState& npc : world_.npcs) {
        if (!npc.alive || npc.hp <= 0) continue;
        const int fog = fog_damage_at(npc.pos, safe, cfg_);
        if (fog > 0) damage_npc(npc, fog, false);
    }
}

void Sim::damage_agent(AgentState& agent, int amount, DeathCause cause, int source) {
    agent.hp = std::max(0, agent.hp - amount);
    if (agent.hp == 0 && agent.death_cause == DeathCause::None) {
        agent.death_cause = cause;
        agent.killer = source;
    }
}

void Sim::damage_npc(NpcState& npc, int amount, bool by_attack) {
    npc.hp = std::max(0, npc.hp - amount);
    if (npc.hp == 0 && by_attack) npc.slain = true;
}

void Sim::stage_deaths() {
    const int size = world_.map.size();

    for (NpcState& npc : world_.npcs) {
        if (!npc.alive || npc.hp > 0) continue;
        if (npc.slain && npc.last_hitter >= 0) {
            AgentState& hitter = world_.agents[npc.last_hitter];
            hitter.gold += npc.level;
            world_.minted_gold += npc.level;
            const ItemStack item = npc_loot_item(npc.level, rng_);
            push({.kind = EventKind::Loot, .actor = npc.last_hitter, .target = npc.npc_id,
                  .value = npc.level, .item = item.kind, .item_level = item.level,
                  .quantity = 1});
            if (!inventory_add(hitter.inventory, item.kind, item.level, 1)) {
                push({.kind = EventKind::ItemDestroyed, .actor = npc.last_hitter,
                      .item = item.kind, .item_level = item.level, .quantity = 1,
                      .aux = static_cast<int>(DestroyReason::LootOverflow)});
            }
        }
        push({.kind = EventKind::NpcDeath, .actor = npc.npc_id,
              .target = npc.slain ? npc.last_hitter : -1, .pos = npc.pos,
              .value = npc.level, .aux = npc.slain ? 1 : 0});
        world_.occupancy[npc.pos.r * size + npc.pos.c] = -1;
        npc.alive = false;
    }

    for (AgentState& agent : world_.agents) {
        if (!agent.alive || agent.hp > 0) continue;
        agent.death_tick = world_.tick;
        agent.level_sum_snapshot = agent.level_sum(cfg_);
        if (agent.death_cause == DeathCause::Slain && agent.killer >= 0 &&
            agent.killer < kAgentCount) {
            world_.defeat_credits[world_.agents[agent.killer].team_id] += 1;
        }
        push({.kind = EventKind::Death, .actor = agent.agent_id, .target = agent.killer,
              .pos = agent.pos, .value = agent.gold,
              .quantity = agent.level_sum_snapshot,
              .aux = static_cast<int>(agent.death_cause)});
        for (const ItemStack& s : agent.inventory) {
            push({.kind = EventKind::ItemDestroyed, .actor = agent.agent_id,
                  .item = s.kind, .item_level = s.level, .quantity = s.quantity,
                  .aux = static_cast<int>(DestroyReason::DeathInventory)});
        }
        agent.inventory.clear();
        for (const auto* slot :
             {&agent.equipment.weapon, &agent.equipment.hat, &agent.equipment.top,
              &agent.equipment.bottom, &agent.equipment.ammo, &agent.equipment.tool}) {
            if (!*slot) continue;
            push({.kind = EventKind::ItemDestroyed, .actor = agent.agent_id,
                  .item = (*slot)->kind, .item_level = (*slot)->level,
                  .quantity = (*slot)->quantity,
                  .aux = static_cast<int>(DestroyReason::DeathEquipment)});
        }
        agent.equipment = Equipment{};
        for (const Listing& l : world_.market.delist_seller(agent.agent_id)) {
            push({.kind = EventKind::ItemDestroyed, .actor = agent.agent_id,
                  .item = l.item.kind, .item_level = l.item.level, .quantity = 1,
                  .aux = static_cast<int>(DestroyReason::DeathListing)});
        }
        world_.occupancy[agent.pos.r * size + agent.pos.c] = -1;
        agent.alive = false;
    }
}

void Sim::stage_respawn() {
    for (std::size_t i = 0; i < timered_tiles_.size();) {
        Tile& t = world_.map.at(timered_tiles_[i]);
        if (t.respawn_timer > 0 && --t.respawn_timer == 0) {
            if (const auto source = terrain_respawns_to(t.kind)) t.kind = *source;
        }
        if (t.respawn_timer == 0) {
            timered_tiles_[i] = timered_tiles_.back();
            timered_tiles_.pop_back();
        } else {
            ++i;
        }
    }
}

void Sim::finalize_match() {
    for (AgentState& agent : world_.agents) {
        if (!agent.alive) continue;
        agent.level_sum_snapshot = agent.level_sum(cfg_);
        push({.kind = EventKind::Survive, .actor = agent.agent_id, .pos = agent.pos,
              .value = agent.gold, .aux = agent.level_sum_snapshot});
        for (const ItemStack& s : agent.inventory) {
            push({.kind = EventKind::Holding, .actor = agent.agent_id, .item = s.kind,
                  .item_level = s.level, .quantity = s.quantity, .aux = 0});
        }
        for (const auto* slot :
             {&agent.equipment.weapon, &agent.equipment.hat, &agent.equipment.top,
              &agent.equipment.bottom, &agent.equipment.ammo, &agent.equipment.tool}) {
            if (!*slot) continue;
            push({.kind = EventKind::Holding, .actor = agent.agent_id,
                  .item = (*slot)->kind, .item_level = (*slot)->level,
                  .quantity = (*slot)->quantity, .aux = 1});
        }
    }
}

void Sim::build_observations() {
    const int size = world_.map.size();
    const int entity_count = kAgentCount + static_cast<int>(world_.npcs.size());
    const int inset = fog_inset_at(world_.tick, cfg_);
    const Rect safe = rect_from_inset(inset, size);
    const Rect next_safe = rect_from_inset(inset + 1, size);
    const auto window_ids = world_.market.window();
    world_.market_window_ids = window_ids;

    std::vector<MarketEntry> window_rows;
    window_rows.reserve(window_ids.size());
    for (std::int64_t id : window_ids) {
        const Listing* l = world_.market.find(id);
        window_rows.push_back({l->listing_id, l->seller, l->item.kind, l->item.level,
                               l->price});
    }

    std::vector<std::uint8_t> seen(entity_count);
    for (int t = 0; t < kTeamCount; ++t) {
        TeamObservation& obs = observations_[t];
        obs.team_id = t;
        obs.tick = world_.tick;
        obs.horizon = cfg_.horizon;
        obs.fog_safe = safe;
        obs.next_fog_safe = next_safe;
        obs.market_window = window_rows;
        obs.visible.clear();
        obs.comms.clear();
        std::fill(seen.begin(), seen.end(), 0);

        for (int k = 0; k < kTeamSize; ++k) {
            const AgentState& mate = world_.agents[t * kTeamSize + k];
            obs.teammates[k] = mate;
            TerrainPatch& patch = obs.patches[k];
            patch.center = mate.pos;
            patch.tiles.fill(TerrainKind::Lava);
            if (!mate.alive) continue;
            for (int dr = -kVisionRadius; dr <= kVisionRadius; ++dr) {
                for (int dc = -kVisionRadius; dc <= kVisionRadius; ++dc) {
                    const Coord q{mate.pos.r + dr, mate.pos.c + dc};
                    if (!world_.map.in_bounds(q)) continue;
                    patch.tiles[(dr + kVisionRadius) * kPatchSide + dc + kVisionRadius] =
                        world_.map.kind(q);
                    const int occupant = world_.occupancy[q.r * size + q.c];
                    if (occupant >= 0) seen[occupant] = 1;
                }
            }
        }

        for (int id = 0; id < entity_count; ++id) {
            if (!seen[id]) continue;
            VisibleEntity v;
            if (is_npc_id(id)) {
                const NpcState& npc = world_.npcs[id - kAgentCount];
                if (!npc.alive) continue;
                v.entity_id = id;
                v.pos = npc.pos;
                v.hp = npc.hp;
                v.is_npc = true;
                v.npc_type = npc.type;
                v.npc_level = npc.level;
                v.main_style = AttackStyle::Melee;
            } else {
                const AgentState& a = world_.agents[id];
                if (!a.alive || a.team_id == t) continue;
                v.entity_id = id;
                v.team_id = a.team_id;
                v.pos = a.pos;
                v.hp = a.hp;
                v.main_style = a.main_style(cfg_);
                v.weapon_level =
                    a.equipment.weapon ? a.equipment.weapon->level : 0;
                v.armor_levels = a.equipment.armor_levels();
            }
            obs.visible.push_back(v);
        }

        for (const AgentState& a : world_.agents) {
            if (a.comm_tick < 0 || a.comm_tick != world_.tick - 1) continue;
            // Heard by any team with an alive member whose window holds the
            // speaker — enemies listen in too.
            bool heard = false;
            for (int k = 0; !heard && k < kTeamSize; ++k) {
                const AgentState& mate = world_.agents[t * kTeamSize + k];
                heard = mate.alive && chebyshev(mate.pos, a.pos) <= kVisionRadius;
            }
            if (heard) obs.comms.push_back({a.agent_id, a.pos, a.comm_token});
        }
    }
}

std::vector<std::string> Sim::check_invariants() const {
    std::vector<std::string> bad;
    const int size = world_.map.size();
    std::vector<int> occ(static_cast<std::size_t>(size) * size, -1);

    auto fail = [&bad](const std::string& what) { bad.push_back(what); };

    for (const AgentState& a : world_.agents) {
        const std::string who = "agent " + std::to_string(a.agent_id);
        if (a.hp < 0 || a.hp > 100) fail(who + ": hp out of range");
        if (a.food_half < 0 || a.food_half > 200) fail(who + ": food out of range");
        if (a.water_half < 0 || a.water_half > 200) fail(who + ": water out of range");
        if (a.inventory.size() > static_cast<std::size_t>(kInventorySlots)) {
            fail(who + ": inventory overflow");
        }
        for (const ItemStack& s : a.inventory) {
            if (s.level < kMinItemLevel || s.level > kMaxItemLevel) {
                fail(who + ": item level out of range");
            }
            if (s.quantity < 1) fail(who + ": empty stack");
            if (s.quantity > 1 && !item_stackable(s.kind)) {
                fail(who + ": unstackable quantity");
            }
        }
        const Equipment& eq = a.equipment;
        auto gate = [&](const std::optional<ItemStack>& slot, SkillKind skill,
                        const char* name) {
            if (slot && a.level(skill, cfg_) < slot->level) {
                fail(who + ": " + name + " above level gate");
            }
        };
        if (eq.weapon) gate(eq.weapon, style_skill(*item_style(eq.weapon->kind)), "weapon");
        if (eq.ammo) gate(eq.ammo, style_skill(*item_style(eq.ammo->kind)), "ammo");
        if (eq.tool) gate(eq.tool, *tool_profession(eq.tool->kind), "tool");
        for (const auto* armor : {&eq.hat, &eq.top, &eq.bottom}) {
            gate(*armor, style_skill(a.main_style(cfg_)), "armor");
        }
        if (a.alive) {
            int& cell = occ[a.pos.r * size + a.pos.c];
            if (cell != -1) fail(who + ": shares a tile with another entity");
            cell = a.agent_id;
            if (!world_.map.passable(a.pos)) fail(who + ": on impassable terrain");
        }
        if (a.gold < 0) fail(who + ": negative gold");
    }
    for (const NpcState& n : world_.npcs) {
        if (!n.alive) continue;
        const std::string who = "npc " + std::to_string(n.npc_id);
        int& cell = occ[n.pos.r * size + n.pos.c];
        if (cell != -1) fail(who + ": shares a tile with another entity");
        cell = n.npc_id;
        if (!world_.map.passable(n.pos)) fail(who + ": on impassable terrain");
    }
    if (occ != world_.occupancy) fail("occupancy index out of sync");
    for (const Listing& l : world_.market.listings()) {
        if (l.price < 1) fail("listing with price < 1");
        if (l.seller < 0 || l.seller >= kAgentCount) fail("listing with bad seller");
    }
    return bad;
}

std::string Sim::state_json() const {
    using json = nlohmann::ordered_json;
    json out;
    out["seed"] = world_.seed;
    out["tick"] = world_.tick;
    out["terminal"] = world_.terminal;
    out["fog_inset"] = world_.fog_inset;
    out["minted_gold"] = world_.minted_gold;
    out["defeat_credits"] = world_.defeat_credits;

    json tiles = json::array();
    const auto& grid = world_.map.tiles();
    std::size_t i = 0;
    while (i < grid.size()) {
        std::size_t j = i;
        while (j < grid.size() && grid[j] == grid[i]) ++j;
        tiles.push_back({static_cast<int>(grid[i].kind), grid[i].respawn_timer, j - i});
        i = j;
    }
    out["map"] = {{"size", world_.map.size()}, {"rle", std::move(tiles)}};

    auto stack_json = [](const ItemStack& s) {
        return json{static_cast<int>(s.kind), s.level, s.quantity};
    };
    json agents = json::array();
    for (const AgentState& a : world_.agents) {
        json row;
        row["id"] = a.agent_id;
        row["team"] = a.team_id;
        row["pos"] = {a.pos.r, a.pos.c};
        row["hp"] = a.hp;
        row["food"] = a.food_half;
        row["water"] = a.water_half;
        row["xp"] = a.xp;
        row["gold"] = a.gold;
        row["alive"] = a.alive;
        row["death_tick"] = a.death_tick;
        row["level_sum"] = a.level_sum_snapshot;
        row["cause"] = static_cast<int>(a.death_cause);
        row["killer"] = a.killer;
        json inv = json::array();
        for (const ItemStack& s : a.inventory) inv.push_back(stack_json(s));
        row["inv"] = std::move(inv);
        json eq = json::array();
        for (const auto* slot :
             {&a.equipment.weapon, &a.equipment.hat, &a.equipment.top,
              &a.equipment.bottom, &a.equipment.ammo, &a.equipment.tool}) {
            eq.push_back(*slot ? stack_json(**slot) : json());
        }
        row["eq"] = std::move(eq);
        agents.push_back(std::move(row));
    }
    out["agents"] = std::move(agents);

    json npcs = json::array();
    for (const NpcState& n : world_.npcs) {
        npcs.push_back({n.npc_id, n.pos.r, n.pos.c, static_cast<int>(n.type), n.level,
                        n.hp, n.alive, n.last_hitter});
    }
    out["npcs"] = std::move(npcs);

    json listings = json::array();
    for (const Listing& l : world_.market.listings()) {
        listings.push_back({l.listing_id, l.seller, static_cast<int>(l.item.kind),
                            l.item.level, l.price});
    }
    out["market"] = {{"next_id", world_.market.next_id()},
                     {"listings", std::move(listings)}};
    out["rng"] = rng_.state_string();
    return out.dump();
}

std::uint64_t Sim::state_hash() const { return fnv64(state_json()); }

}  // namespace arena
