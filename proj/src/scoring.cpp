#include "arena/scoring.hpp"

#include <algorithm>
#include <stdexcept>

#include "arena/engine.hpp"

namespace arena {

namespace {

// Sort key, all descending. avg_level compares by the integer numerator.
bool outcome_better(const TeamOutcome& a, const TeamOutcome& b) {
    if (a.death_tick != b.death_tick) return a.death_tick > b.death_tick;
    if (a.survivors_at_end != b.survivors_at_end) {
        return a.survivors_at_end > b.survivors_at_end;
    }
    return a.level_sum > b.level_sum;
}

bool outcome_tied(const TeamOutcome& a, const TeamOutcome& b) {
    return a.death_tick == b.death_tick &&
           a.survivors_at_end == b.survivors_at_end && a.level_sum == b.level_sum;
}

}  // namespace

std::array<std::int64_t, kTeamCount> survival_score_units(
    const std::array<TeamOutcome, kTeamCount>& outcomes) {
    std::array<int, kTeamCount> order;
    for (int i = 0; i < kTeamCount; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return outcome_better(outcomes[a], outcomes[b]);
    });

    std::array<std::int64_t, kTeamCount> units{};
    int i = 0;
    while (i < kTeamCount) {
        int j = i;
        while (j + 1 < kTeamCount &&
               outcome_tied(outcomes[order[i]], outcomes[order[j + 1]])) {
            ++j;
        }
        std::int64_t pool = 0;
        for (int k = i; k <= j; ++k) pool += kSurvivalVector[k];
        const std::int64_t share = pool * kScoreScale / (j - i + 1);
        for (int k = i; k <= j; ++k) units[outcomes[order[k]].team_id] = share;
        i = j + 1;
    }
    return units;
}

std::array<TeamOutcome, kTeamCount> team_outcomes(const WorldState& final_state,
                                                  const SimConfig& cfg) {
    std::array<TeamOutcome, kTeamCount> out{};
    for (int t = 0; t < kTeamCount; ++t) {
        TeamOutcome& o = out[t];
        o.team_id = t;
        o.defeat_credits = final_state.defeat_credits[t];
        o.death_tick = 0;
        for (int k = 0; k < kTeamSize; ++k) {
            const AgentState& a = final_state.agents[t * kTeamSize + k];
            o.level_sum += a.level_sum_snapshot;
            if (a.alive) {
                ++o.survivors_at_end;
            } else {
                o.death_tick = std::max(o.death_tick, a.death_tick);
            }
        }
        if (o.survivors_at_end > 0) o.death_tick = cfg.horizon + 1;
    }
    return out;
}

MatchScore match_score_from_outcomes(
    const std::array<TeamOutcome, kTeamCount>& outcomes) {
    const auto survival = survival_score_units(outcomes);
    MatchScore score;
    for (int t = 0; t < kTeamCount; ++t) {
        TeamScore& s = score.teams[t];
        s.team_id = t;
        s.defeat_units = defeat_score_units(outcomes[t].defeat_credits);
        s.survival_units = survival[t];
        s.total_units = s.defeat_units + s.survival_units;
    }
    for (int t = 0; t < kTeamCount; ++t) {
        int rank = 1;
        for (int u = 0; u < kTeamCount; ++u) {
            if (score.teams[u].total_units > score.teams[t].total_units) ++rank;
        }
        score.teams[t].rank = rank;
    }
    return score;
}

MatchScore match_score(const WorldState& final_state, const SimConfig& cfg) {
    if (!final_state.terminal) {
        throw std::invalid_argument("match_score: world is not terminal");
    }
    return match_score_from_outcomes(team_outcomes(final_state, cfg));
}

}  // namespace arena
