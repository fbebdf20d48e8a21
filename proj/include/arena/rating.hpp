#pragma once

#include <cstdint>
#include <vector>

namespace arena {

struct TrueSkillParams {
    double mu0 = 25.0;
    double sigma0 = 25.0 / 3.0;
    double beta = 25.0 / 6.0;
    double tau = 25.0 / 300.0;
    double p_draw = 0.1;
};

struct Rating {
    double mu = 25.0;
    double sigma = 25.0 / 3.0;
};

// Conservative leaderboard estimate; sort descending.
inline double leaderboard_score(const Rating& r) { return r.mu - 3.0 * r.sigma; }

// Standard normal pdf/cdf and inverse cdf.
double norm_pdf(double x);
double norm_cdf(double x);
double norm_ppf(double p);

// Margin within which a pairwise performance difference counts as a draw.
double draw_margin(const TrueSkillParams& params);

// Fraction of entries equal to 1. Throws on an empty list.
double top1_ratio(const std::vector<int>& ranks);

// One TrueSkill update over a finished match. `ranks` are 1-based
// competition ranks (ties share the better rank), one per rating.
// Expectation propagation over the rank-adjacent chain; tied neighbors get
// draw factors. Throws on a malformed rank vector.
std::vector<Rating> rate_match(const std::vector<Rating>& ratings,
                               const std::vector<int>& ranks,
                               const TrueSkillParams& params = {});

}  // namespace arena
