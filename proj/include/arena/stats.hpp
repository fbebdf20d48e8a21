#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "arena/items.hpp"
#include "arena/replay.hpp"

namespace arena {

struct PriceCell {
    std::int64_t quantity = 0;     // listings seen
    std::int64_t price_total = 0;  // sum of listed prices

    double mean_price() const { return quantity ? double(price_total) / quantity : 0.0; }
};

struct TeamRadar {
    std::int64_t defeat_credits = 0;
    std::int64_t survival_ticks = 0;  // death_tick summed over matches
    std::int64_t damage_dealt = 0;
    std::int64_t damage_taken = 0;
    std::int64_t gold_earned = 0;     // sale income plus looted gold
    std::int64_t equipment_score = 0; // levels of gear still worn at match end
};

// Aggregated match analytics. All accumulators are integers so merging is
// exact and order-insensitive; derived ratios are computed on demand.
struct StatsReport {
    std::int64_t matches = 0;
    std::array<std::int64_t, kItemCategoryCount> item_distribution{};
    std::array<std::int64_t, kItemKindCount> item_quantity{};
    std::array<std::int64_t, kItemCategoryCount> buys{};
    std::array<std::int64_t, kItemCategoryCount> lists{};
    std::map<std::pair<int, int>, PriceCell> price_grid;  // (kind, level) keys
    std::array<TeamRadar, kTeamCount> team_radar{};

    // Buys per listing; -1 stands in for "no listings" (the infinite case).
    double buy_sell_ratio(ItemCategory c) const {
        const auto i = static_cast<int>(c);
        return lists[i] ? double(buys[i]) / double(lists[i]) : -1.0;
    }

    void merge(const StatsReport& other);
};

StatsReport stats_of_replay(const Replay& replay);

// Folds stats_of_replay over the collection. Throws std::invalid_argument
// when it is empty.
StatsReport compute_stats(const std::vector<Replay>& replays);

// Mean listed price per level for one category, level-ascending, levels with
// no listings skipped.
std::vector<std::pair<int, double>> category_price_by_level(const StatsReport& report,
                                                            ItemCategory category);

// Spearman rank correlation with average ranks for ties; 0 when degenerate.
double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys);

// Writes the five CSV files (item_distribution, item_quantity,
// buy_sell_ratio, price_grid, team_radar) into out_dir, creating it if
// needed. Emission is deterministic; equal reports produce equal bytes. A
// report with no matches yields header-only files.
void emit_csv(const StatsReport& report, const std::string& out_dir);

}  // namespace arena
