#include "arena/config.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace arena {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

struct Field {
    std::function<std::string(const SimConfig&)> get;
    std::function<void(SimConfig&, const std::string&)> set;
};

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T v{};
    in >> v;
    if (in.fail()) throw ConfigError("bad value for " + key + ": " + value);
    return v;
}

std::map<std::string, Field> field_table() {
    std::map<std::string, Field> t;
    auto add_int = [&t](const std::string& key, int SimConfig::*member) {
        t[key] = {[member](const SimConfig& c) { return std::to_string(c.*member); },
                  [member, key](SimConfig& c, const std::string& v) {
                      c.*member = parse_number<int>(key, v);
                  }};
    };
    add_int("horizon", &SimConfig::horizon);
    add_int("fog.start_tick", &SimConfig::fog_start_tick);
    add_int("fog.shrink_interval", &SimConfig::fog_shrink_interval);
    add_int("fog.damage_per_tile", &SimConfig::fog_damage_per_tile);
    add_int("metabolism.decay_half_per_tick", &SimConfig::decay_half_per_tick);
    add_int("metabolism.starve_hp_per_tick", &SimConfig::starve_hp_per_tick);
    add_int("metabolism.regen_threshold", &SimConfig::regen_threshold);
    add_int("metabolism.regen_hp_per_tick", &SimConfig::regen_hp_per_tick);
    add_int("combat.base_power", &SimConfig::base_power);
    add_int("combat.skill_power", &SimConfig::skill_power);
    add_int("combat.weapon_power", &SimConfig::weapon_power);
    add_int("combat.ammo_power", &SimConfig::ammo_power);
    add_int("combat.armor_defense", &SimConfig::armor_defense);
    add_int("combat.min_damage", &SimConfig::min_damage);
    add_int("combat.dominance_num", &SimConfig::dominance_num);
    add_int("combat.dominance_den", &SimConfig::dominance_den);
    add_int("npc.hp_base", &SimConfig::npc_hp_base);
    add_int("npc.hp_per_level", &SimConfig::npc_hp_per_level);
    add_int("economy.consumable_restore_per_level", &SimConfig::consumable_restore_per_level);
    add_int("skills.xp_per_level", &SimConfig::xp_per_level);
    add_int("map.respawn_ticks", &SimConfig::resource_respawn_ticks);

    t["map.size"] = {[](const SimConfig& c) { return std::to_string(c.map.size); },
                     [](SimConfig& c, const std::string& v) {
                         c.map.size = parse_number<int>("map.size", v);
                     }};
    t["map.npc_count"] = {[](const SimConfig& c) { return std::to_string(c.map.npc_count); },
                          [](SimConfig& c, const std::string& v) {
                              c.map.npc_count = parse_number<int>("map.npc_count", v);
                          }};
    for (int k = 0; k < kTerrainKindCount; ++k) {
        const std::string key = "map.ratio." + std::string(kTerrainNames[k]);
        t[key] = {[k](const SimConfig& c) {
                      std::ostringstream out;
                      out << c.map.ratios[k];
                      return out.str();
                  },
                  [k, key](SimConfig& c, const std::string& v) {
                      c.map.ratios[k] = parse_number<double>(key, v);
                  }};
    }
    return t;
}

}  // namespace

void MapGenConfig::validate() const {
    if (size < 32) throw ConfigError("map size must be >= 32");
    if (size % 2 != 0) throw ConfigError("map size must be even");
    if (npc_count < 0) throw ConfigError("npc_count must be >= 0");
    double total = 0.0;
    for (int k = 0; k < kTerrainKindCount; ++k) {
        if (ratios[k] < 0.0) {
            throw ConfigError("negative ratio for " + std::string(kTerrainNames[k]));
        }
        if (ratios[k] > 0.0 && terrain_degraded(static_cast<TerrainKind>(k))) {
            throw ConfigError("degraded kind cannot be generated: " +
                              std::string(kTerrainNames[k]));
        }
        total += ratios[k];
    }
    if (total > 1.0 + 1e-9) throw ConfigError("terrain ratios sum above 1");
}

void SimConfig::validate() const {
    map.validate();
    if (horizon < 1) throw ConfigError("horizon must be positive");
    if (fog_shrink_interval < 1) throw ConfigError("fog.shrink_interval must be positive");
    if (fog_damage_per_tile < 0) throw ConfigError("fog.damage_per_tile must be >= 0");
    if (dominance_den < 1 || dominance_num < dominance_den) {
        throw ConfigError("dominance multiplier must be >= 1");
    }
    if (min_damage < 0) throw ConfigError("combat.min_damage must be >= 0");
    if (xp_per_level < 1) throw ConfigError("skills.xp_per_level must be positive");
    if (resource_respawn_ticks < 1) throw ConfigError("map.respawn_ticks must be positive");
}

SimConfig SimConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

SimConfig SimConfig::parse(const std::string& text) {
    SimConfig cfg;
    const auto table = field_table();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = table.find(key);
        if (it == table.end()) throw ConfigError("unknown config key: " + key);
        it->second.set(cfg, value);
    }
    cfg.validate();
    return cfg;
}

std::string SimConfig::serialize() const {
    const auto table = field_table();
    std::ostringstream out;
    for (const auto& [key, field] : table) {
        out << key << " = " << field.get(*this) << "\n";
    }
    return out.str();
}

}  // namespace arena
