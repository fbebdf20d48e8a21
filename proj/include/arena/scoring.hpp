#pragma once

#include <array>
#include <cstdint>

#include "arena/config.hpp"

namespace arena {

struct WorldState;

// Scores are kept in integer units of 1/720720 of a point. 720720 is
// lcm(1..16), so splitting any run of survival-vector entries across a tied
// group stays exact, and the 0.5-point defeat step is representable.
inline constexpr std::int64_t kScoreScale = 720720;

// Survival points by final standing, best first.
inline constexpr std::array<int, kTeamCount> kSurvivalVector = {
    10, 6, 5, 4, 3, 2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0};

// One team's end-of-match summary, the input to ranking.
struct TeamOutcome {
    int team_id = -1;
    std::int64_t defeat_credits = 0;
    // Tick the last member died; horizon+1 when any member survived.
    int death_tick = 0;
    int survivors_at_end = 0;
    // Sum over the 8 members of each member's 8-skill level sum, frozen at
    // that member's death (or at match end). avg_level is this over 64.
    int level_sum = 0;

    double avg_level() const { return level_sum / 64.0; }
};

struct TeamScore {
    int team_id = -1;
    std::int64_t defeat_units = 0;
    std::int64_t survival_units = 0;
    std::int64_t total_units = 0;
    int rank = 0;  // 1-based; tied totals share the better rank

    double defeat_points() const { return double(defeat_units) / kScoreScale; }
    double survival_points() const { return double(survival_units) / kScoreScale; }
    double total_points() const { return double(total_units) / kScoreScale; }
};

struct MatchScore {
    std::array<TeamScore, kTeamCount> teams{};  // team-id order
};

constexpr std::int64_t defeat_score_units(std::int64_t credits) {
    return credits * (kScoreScale / 2);
}

// Ranks outcomes by (death_tick, survivors, avg_level) descending; a group
// tied on all three keys splits the vector entries it spans evenly.
std::array<std::int64_t, kTeamCount> survival_score_units(
    const std::array<TeamOutcome, kTeamCount>& outcomes);

std::array<TeamOutcome, kTeamCount> team_outcomes(const WorldState& final_state,
                                                  const SimConfig& cfg);

MatchScore match_score_from_outcomes(
    const std::array<TeamOutcome, kTeamCount>& outcomes);

// Scores a finished match. Requires a terminal world.
MatchScore match_score(const WorldState& final_state, const SimConfig& cfg);

}  // namespace arena
