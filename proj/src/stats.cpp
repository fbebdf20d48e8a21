#include "arena/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace arena {

namespace {

bool agent_id(int id) { return id >= 0 && id < kAgentCount; }

int team_of(int id) { return id / kTeamSize; }

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("stats: cannot open " + path.string());
    out.write(text.data(), std::streamsize(text.size()));
    if (!out) throw std::runtime_error("stats: write failed " + path.string());
}

}  // namespace

void StatsReport::merge(const StatsReport& other) {
    matches += other.matches;
    for (int i = 0; i < kItemCategoryCount; ++i) {
        item_distribution[i] += other.item_distribution[i];
        buys[i] += other.buys[i];
        lists[i] += other.lists[i];
    }
    for (int i = 0; i < kItemKindCount; ++i) item_quantity[i] += other.item_quantity[i];
    for (const auto& [key, cell] : other.price_grid) {
        PriceCell& mine = price_grid[key];
        mine.quantity += cell.quantity;
        mine.price_total += cell.price_total;
    }
    for (int t = 0; t < kTeamCount; ++t) {
        team_radar[t].defeat_credits += other.team_radar[t].defeat_credits;
        team_radar[t].survival_ticks += other.team_radar[t].survival_ticks;
        team_radar[t].damage_dealt += other.team_radar[t].damage_dealt;
        team_radar[t].damage_taken += other.team_radar[t].damage_taken;
        team_radar[t].gold_earned += other.team_radar[t].gold_earned;
        team_radar[t].equipment_score += other.team_radar[t].equipment_score;
    }
}

StatsReport stats_of_replay(const Replay& replay) {
    StatsReport r;
    r.matches = 1;
    for (const ReplayTick& tick : replay.ticks) {
        for (const Event& e : tick.events) {
            switch (e.kind) {
                case EventKind::Harvest:
                case EventKind::Loot: {
                    if (e.kind == EventKind::Loot && agent_id(e.actor)) {
                        r.team_radar[team_of(e.actor)].gold_earned += e.value;
                    }
                    if (e.item_level == 0) break;  // direct food/water restore
                    r.item_distribution[static_cast<int>(item_category(e.item))] += e.quantity;
                    r.item_quantity[static_cast<int>(e.item)] += e.quantity;
                    break;
                }
                case EventKind::List: {
                    r.lists[static_cast<int>(item_category(e.item))] += 1;
                    PriceCell& cell = r.price_grid[{static_cast<int>(e.item), e.item_level}];
                    cell.quantity += 1;
                    cell.price_total += e.value;
                    break;
                }
                case EventKind::Buy:
                    r.buys[static_cast<int>(item_category(e.item))] += 1;
                    if (agent_id(e.target)) r.team_radar[team_of(e.target)].gold_earned += e.value;
                    break;
                case EventKind::Attack:
                    if (agent_id(e.actor)) r.team_radar[team_of(e.actor)].damage_dealt += e.value;
                    if (agent_id(e.target)) r.team_radar[team_of(e.target)].damage_taken += e.value;
                    break;
                case EventKind::Death:
                    if (e.aux == static_cast<int>(DeathCause::Slain) && agent_id(e.target)) {
                        r.team_radar[team_of(e.target)].defeat_credits += 1;
                    }
                    break;
                case EventKind::Holding:
                    if (e.aux == 1 && agent_id(e.actor)) {
                        r.team_radar[team_of(e.actor)].equipment_score += e.item_level;
                    }
                    break;
                default:
                    break;
            }
        }
    }
    const auto outcomes = outcomes_from_events(replay.flat_events(), replay.header.cfg);
    for (int t = 0; t < kTeamCount; ++t) {
        r.team_radar[t].survival_ticks += outcomes[t].death_tick;
    }
    return r;
}

StatsReport compute_stats(const std::vector<Replay>& replays) {
    if (replays.empty()) throw std::invalid_argument("stats: no replays");
    StatsReport total;
    for (const Replay& r : replays) total.merge(stats_of_replay(r));
    return total;
}

std::vector<std::pair<int, double>> category_price_by_level(const StatsReport& report,
                                                            ItemCategory category) {
    std::map<int, PriceCell> by_level;
    for (const auto& [key, cell] : report.price_grid) {
        if (item_category(static_cast<ItemKind>(key.first)) != category) continue;
        PriceCell& agg = by_level[key.second];
        agg.quantity += cell.quantity;
        agg.price_total += cell.price_total;
    }
    std::vector<std::pair<int, double>> out;
    for (const auto& [level, cell] : by_level) out.emplace_back(level, cell.mean_price());
    return out;
}

double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n != ys.size() || n < 2) return 0.0;
    auto ranks = [n](const std::vector<double>& v) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> rank(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = (double(i) + double(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
            i = j + 1;
        }
        return rank;
    };
    const std::vector<double> rx = ranks(xs);
    const std::vector<double> ry = ranks(ys);
    const double mean = (double(n) + 1.0) / 2.0;
    double cov = 0.0, var_x = 0.0, var_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (rx[i] - mean) * (ry[i] - mean);
        var_x += (rx[i] - mean) * (rx[i] - mean);
        var_y += (ry[i] - mean) * (ry[i] - mean);
    }
    if (var_x == 0.0 || var_y == 0.0) return 0.0;
    return cov / std::sqrt(var_x * var_y);
}

void emit_csv(const StatsReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const bool empty = report.matches == 0;

    std::string text = "category,count\n";
    if (!empty) {
        for (int i = 0; i < kItemCategoryCount; ++i) {
            text += std::string(kItemCategoryNames[i]) + "," +
                    std::to_string(report.item_distribution[i]) + "\n";
        }
    }
    write_file(dir / "item_distribution.csv", text);

    text = "kind,count\n";
    if (!empty) {
        for (int i = 0; i < kItemKindCount; ++i) {
            text += std::string(kItemNames[i]) + "," + std::to_string(report.item_quantity[i]) +
                    "\n";
        }
    }
    write_file(dir / "item_quantity.csv", text);

    text = "category,buys,lists,ratio\n";
    if (!empty) {
        for (int i = 0; i < kItemCategoryCount; ++i) {
            const double ratio = report.buy_sell_ratio(static_cast<ItemCategory>(i));
            text += std::string(kItemCategoryNames[i]) + "," + std::to_string(report.buys[i]) +
                    "," + std::to_string(report.lists[i]) + "," +
                    (report.lists[i] ? fixed4(ratio) : std::string("-1")) + "\n";
        }
    }
    write_file(dir / "buy_sell_ratio.csv", text);

    text = "kind,level,quantity,mean_price\n";
    for (const auto& [key, cell] : report.price_grid) {
        text += std::string(kItemNames[key.first]) + "," + std::to_string(key.second) + "," +
                std::to_string(cell.quantity) + "," + fixed4(cell.mean_price()) + "\n";
    }
    write_file(dir / "price_grid.csv", text);

    text = "team,defeat_credits,survival_ticks,damage_dealt,damage_taken,gold_earned,"
           "equipment_score\n";
    if (!empty) {
        for (int t = 0; t < kTeamCount; ++t) {
            const TeamRadar& r = report.team_radar[t];
            text += std::to_string(t) + "," + std::to_string(r.defeat_credits) + "," +
                    std::to_string(r.survival_ticks) + "," + std::to_string(r.damage_dealt) +
                    "," + std::to_string(r.damage_taken) + "," + std::to_string(r.gold_earned) +
                    "," + std::to_string(r.equipment_score) + "\n";
        }
    }
    write_file(dir / "team_radar.csv", text);
}

}  // namespace arena
