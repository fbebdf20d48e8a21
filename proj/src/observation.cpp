#include "arena/observation.hpp"

#include <json.hpp>

namespace arena {

std::string observation_to_json(const TeamObservation& obs) {
    using json = nlohmann::ordered_json;
    json out;
    out["team"] = obs.team_id;
    out["tick"] = obs.tick;
    out["horizon"] = obs.horizon;
    out["fog_safe"] = {obs.fog_safe.lo_r, obs.fog_safe.lo_c, obs.fog_safe.hi_r,
                       obs.fog_safe.hi_c};
    out["next_fog_safe"] = {obs.next_fog_safe.lo_r, obs.next_fog_safe.lo_c,
                            obs.next_fog_safe.hi_r, obs.next_fog_safe.hi_c};

    json mates = json::array();
    for (int k = 0; k < kTeamSize; ++k) {
        const AgentState& a = obs.teammates[k];
        json row;
        row["id"] = a.agent_id;
        row["pos"] = {a.pos.r, a.pos.c};
        row["hp"] = a.hp;
        row["food"] = a.food_half;
        row["water"] = a.water_half;
        row["xp"] = a.xp;
        row["gold"] = a.gold;
        row["alive"] = a.alive;
        json inv = json::array();
        for (const ItemStack& s : a.inventory) {
            inv.push_back({static_cast<int>(s.kind), s.level, s.quantity});
        }
        row["inv"] = std::move(inv);
        json eq = json::array();
        for (const auto* slot :
             {&a.equipment.weapon, &a.equipment.hat, &a.equipment.top,
              &a.equipment.bottom, &a.equipment.ammo, &a.equipment.tool}) {
            if (*slot) {
                eq.push_back({static_cast<int>((*slot)->kind), (*slot)->level,
                              (*slot)->quantity});
            } else {
                eq.push_back(nullptr);
            }
        }
        row["eq"] = std::move(eq);
        json patch = json::array();
        for (TerrainKind t : obs.patches[k].tiles) patch.push_back(static_cast<int>(t));
        row["patch"] = std::move(patch);
        mates.push_back(std::move(row));
    }
    out["teammates"] = std::move(mates);

    json visible = json::array();
    for (const VisibleEntity& v : obs.visible) {
        json row;
        row["id"] = v.entity_id;
        row["team"] = v.team_id;
        row["pos"] = {v.pos.r, v.pos.c};
        row["hp"] = v.hp;
        row["style"] = kStyleNames[static_cast<int>(v.main_style)];
        row["npc"] = v.is_npc;
        if (v.is_npc) {
            row["npc_type"] = kNpcTypeNames[static_cast<int>(v.npc_type)];
            row["npc_level"] = v.npc_level;
        } else {
            row["weapon_level"] = v.weapon_level;
            row["armor_levels"] = v.armor_levels;
        }
        visible.push_back(std::move(row));
    }
    out["visible"] = std::move(visible);

    json market = json::array();
    for (const MarketEntry& e : obs.market_window) {
        market.push_back({e.listing_id, e.seller, static_cast<int>(e.kind), e.level,
                          e.price});
    }
    out["market"] = std::move(market);

    json comms = json::array();
    for (const CommHeard& c : obs.comms) {
        comms.push_back({c.speaker, c.pos.r, c.pos.c, c.token});
    }
    out["comms"] = std::move(comms);
    return out.dump();
}

}  // namespace arena
