#include "arena/rating.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace arena {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// Gaussian in natural parameters: pi = 1/variance, eta = mean/variance.
struct Nat {
    double pi = 0.0;
    double eta = 0.0;
};

Nat operator-(Nat a, Nat b) { return {a.pi - b.pi, a.eta - b.eta}; }

// phi(a) / Phi(-a), the hazard of the upper tail at a. Continued-fraction
// Mills ratio in the far tail where the direct quotient loses digits.
double tail_hazard(double a) {
    if (a < 6.0) return norm_pdf(a) / norm_cdf(-a);
    double tail = 0.0;
    for (int k = 40; k >= 1; --k) tail = k / (a + tail);
    return a + tail;
}

// Moments of N(mean, var) truncated to (lo, +inf).
void truncate_above(double mean, double var, double lo, double& out_mean,
                    double& out_var) {
    const double sd = std::sqrt(var);
    const double a = (lo - mean) / sd;
    const double h = tail_hazard(a);
    out_mean = mean + sd * h;
    out_var = var * (1.0 - h * (h - a));
    out_var = std::max(out_var, var * 1e-12);
}

// Moments of N(mean, var) truncated to [lo, hi].
void truncate_between(double mean, double var, double lo, double hi,
                      double& out_mean, double& out_var) {
    const double sd = std::sqrt(var);
    const double a = (lo - mean) / sd;
    const double b = (hi - mean) / sd;
    const double z = norm_cdf(b) - norm_cdf(a);
    if (z < 1e-250) {
        // Essentially all mass outside: collapse to the nearer boundary.
        out_mean = std::clamp(mean, lo, hi);
        out_var = var * 1e-9;
        return;
    }
    const double pa = norm_pdf(a);
    const double pb = norm_pdf(b);
    const double lam = (pa - pb) / z;
    out_mean = mean + sd * lam;
    out_var = var * (1.0 + (a * pa - b * pb) / z - lam * lam);
    out_var = std::max(out_var, var * 1e-12);
}

void validate_ranks(const std::vector<int>& ranks, std::size_t n) {
    if (ranks.size() != n) throw std::invalid_argument("rank count mismatch");
    // Competition ranking: a rank value must equal 1 + the number of
    // strictly better teams.
    for (int r : ranks) {
        int better = 0;
        for (int other : ranks) {
            if (other < r) ++better;
        }
        if (r != better + 1) throw std::invalid_argument("invalid rank vector");
    }
}

}  // namespace

double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double norm_ppf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("norm_ppf domain is (0, 1)");
    }
    // Acklam's rational approximation, then one Halley polish step.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
            q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = norm_cdf(x) - p;
    const double u = e / norm_pdf(x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

double draw_margin(const TrueSkillParams& params) {
    return kSqrt2 * params.beta * norm_ppf(0.5 * (params.p_draw + 1.0));
}

double top1_ratio(const std::vector<int>& ranks) {
    if (ranks.empty()) throw std::invalid_argument("top1_ratio of no matches");
    std::size_t wins = 0;
    for (int r : ranks) {
        if (r == 1) ++wins;
    }
    return static_cast<double>(wins) / static_cast<double>(ranks.size());
}

std::vector<Rating> rate_match(const std::vector<Rating>& ratings,
                               const std::vector<int>& ranks,
                               const TrueSkillParams& params) {
    const std::size_t n = ratings.size();
    validate_ranks(ranks, n);
    if (n == 0) return {};

    // Skill priors widen by the dynamics variance; performance adds beta^2.
    std::vector<double> skill_var(n);
    std::vector<Nat> prior(n);
    for (std::size_t i = 0; i < n; ++i) {
        skill_var[i] = ratings[i].sigma * ratings[i].sigma + params.tau * params.tau;
        const double v = skill_var[i] + params.beta * params.beta;
        prior[i] = {1.0 / v, ratings[i].mu / v};
    }
    if (n == 1) {
        return {Rating{ratings[0].mu, std::sqrt(skill_var[0])}};
    }

    // Chain order: best rank first. Ties order by rating content so the
    // factor graph, and with it the update, is invariant under relabeling.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ranks[a] != ranks[b]) return ranks[a] < ranks[b];
        if (ratings[a].mu != ratings[b].mu) return ratings[a].mu > ratings[b].mu;
        return ratings[a].sigma < ratings[b].sigma;
    });

    const double eps = draw_margin(params);
    std::vector<Nat> marginal = prior;  // indexed by team, like prior
    const std::size_t m = n - 1;       // factors between chain neighbors
    std::vector<Nat> msg_left(m), msg_right(m);

    for (int sweep = 0; sweep < 20; ++sweep) {
        double delta = 0.0;
        auto update = [&](std::size_t k) {
            const std::size_t i = order[k];
            const std::size_t j = order[k + 1];
            const Nat cav1 = marginal[i] - msg_left[k];
            const Nat cav2 = marginal[j] - msg_right[k];
            if (cav1.pi < 1e-12 || cav2.pi < 1e-12) return;
            const double v1 = 1.0 / cav1.pi;
            const double v2 = 1.0 / cav2.pi;
            const double m1 = cav1.eta * v1;
            const double m2 = cav2.eta * v2;
            const double md = m1 - m2;
            const double vd = v1 + v2;
            double dm, dv;
            if (ranks[i] == ranks[j]) {
                truncate_between(md, vd, -eps, eps, dm, dv);
            } else {
                truncate_above(md, vd, eps, dm, dv);
            }
            // Condition each endpoint on the moment-matched difference.
            const double shift = dm - md;
            const double shrink = vd - dv;
            const double nm1 = m1 + (v1 / vd) * shift;
            const double nv1 = v1 - (v1 / vd) * (v1 / vd) * shrink;
            const double nm2 = m2 - (v2 / vd) * shift;
            const double nv2 = v2 - (v2 / vd) * (v2 / vd) * shrink;
            const Nat new1{1.0 / nv1, nm1 / nv1};
            const Nat new2{1.0 / nv2, nm2 / nv2};
            const Nat ml = new1 - cav1;
            const Nat mr = new2 - cav2;
            delta = std::max({delta, std::abs(ml.pi - msg_left[k].pi),
                              std::abs(ml.eta - msg_left[k].eta),
                              std::abs(mr.pi - msg_right[k].pi),
                              std::abs(mr.eta - msg_right[k].eta)});
            msg_left[k] = ml;
            msg_right[k] = mr;
            marginal[i] = new1;
            marginal[j] = new2;
        };
        for (std::size_t k = 0; k < m; ++k) update(k);
        for (std::size_t k = m; k-- > 0;) update(k);
        if (delta < 1e-4) break;
    }

    // Peel the performance noise back off: the chain's evidence about p_i
    // reaches s_i through the beta-noise factor.
    std::vector<Rating> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Nat evidence = marginal[i] - prior[i];
        double post_pi = 1.0 / skill_var[i];
        double post_eta = ratings[i].mu / skill_var[i];
        if (evidence.pi > 1e-12) {
            const double ev = 1.0 / evidence.pi + params.beta * params.beta;
            post_pi += 1.0 / ev;
            post_eta += (evidence.eta / evidence.pi) / ev;
        }
        out[i].mu = post_eta / post_pi;
        out[i].sigma = std::sqrt(1.0 / post_pi);
    }
    return out;
}

}  // namespace arena
