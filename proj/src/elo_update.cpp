#include "scelo/elo_update.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scelo/probability.hpp"

namespace scelo {

namespace {

void check_context(const UpdateContext& ctx) {
    double n = ctx.total_games();
    if (ctx.actual_score < 0.0 || ctx.actual_score > n)
        throw std::invalid_argument("actual_score must lie in [0, total games]");
    for (const Opponent& o : ctx.opponents) {
        if (!std::isfinite(o.rating)) throw std::invalid_argument("opponent rating must be finite");
        if (o.games < 0.0) throw std::invalid_argument("game counts must be >= 0");
    }
}

}  // namespace

double UpdateContext::total_games() const {
    double n = 0.0;
    for (const Opponent& o : opponents) n += o.games;
    return n;
}

double expected_score(double r, std::span<const Opponent> opponents) {
    if (!std::isfinite(r)) throw std::invalid_argument("rating must be finite");
    double e = 0.0;
    for (const Opponent& o : opponents) e += o.games * win_prob(r, o.rating);
    return e;
}

double expected_score_slope(double r, std::span<const Opponent> opponents) {
    if (!std::isfinite(r)) throw std::invalid_argument("rating must be finite");
    double s = 0.0;
    for (const Opponent& o : opponents) {
        double p = win_prob(r, o.rating);
        s += o.games * p * (1.0 - p);
    }
    return kBeta * s;
}

UpdateResult classic_update(const UpdateContext& ctx) {
    check_context(ctx);
    double k = ctx.prior.k();
    double e = expected_score(ctx.prior.mu, ctx.opponents);
    double r = ctx.prior.mu + k * (ctx.actual_score - e);
    return {r, ctx.prior.sigma, 1, e, expected_score_slope(ctx.prior.mu, ctx.opponents)};
}

UpdateResult sc_update(const UpdateContext& ctx, double tol, double damping, int max_iters) {
    check_context(ctx);
    double k = ctx.prior.k();
    if (!(k > 0.0)) throw std::invalid_argument("sc_update needs K > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("damping must be in (0,1]");
    double r0 = ctx.prior.mu;
    // R0 + K(A - E(R)) - R is strictly decreasing, so the root is bracketed
    // by the prior on one side and the full classic step on the other. Any
    // iterate that escapes the bracket is replaced by its midpoint, which
    // keeps the damped Taylor iteration convergent for every damping weight.
    double classic = r0 + k * (ctx.actual_score - expected_score(r0, ctx.opponents));
    double lo = std::min(r0, classic);
    double hi = std::max(r0, classic);
    double r = r0;
    for (int t = 1; t <= max_iters; ++t) {
        double e = expected_score(r, ctx.opponents);
        double s = expected_score_slope(r, ctx.opponents);
        double hat = (r0 + k * (ctx.actual_score - e + s * r)) / (1.0 + s * k);
        double next = damping * hat + (1.0 - damping) * r;
        if (std::abs(hat - r) < tol) {
            double games = ctx.total_games();
            double sigma = games > 0.0 ? variance_binomial(ctx.prior.sigma, next, ctx.opponents)
                                       : ctx.prior.sigma;
            return {next, sigma, t, expected_score(next, ctx.opponents),
                    expected_score_slope(next, ctx.opponents)};
        }
        (r0 + k * (ctx.actual_score - e) - r > 0.0 ? lo : hi) = r;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        r = next;
    }
    throw NonConvergenceError("sc_update did not converge", r, max_iters);
}

UpdateResult sc_update_uninformative(const UpdateContext& ctx, double tol, int max_iters) {
    check_context(ctx);
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    double n = ctx.total_games();
    if (!(ctx.actual_score > 0.0 && ctx.actual_score < n))
        throw std::invalid_argument(
            "flat-prior update needs 0 < A < N; an all-win or all-loss record has no finite rating");
    // Bracket the root of E(R) = A, then take slope steps clipped to the
    // bracket; E is strictly increasing so the root is unique.
    double lo = ctx.prior.mu, hi = ctx.prior.mu;
    for (double step = 400.0; expected_score(lo, ctx.opponents) >= ctx.actual_score; step *= 2.0)
        lo -= step;
    for (double step = 400.0; expected_score(hi, ctx.opponents) <= ctx.actual_score; step *= 2.0)
        hi += step;
    double r = ctx.prior.mu;
    for (int t = 1; t <= max_iters; ++t) {
        double e = expected_score(r, ctx.opponents);
        double s = expected_score_slope(r, ctx.opponents);
        double next = r + (ctx.actual_score - e) / s;
        if (std::abs(next - r) < tol) {
            double s_final = expected_score_slope(next, ctx.opponents);
            double var_a = 0.0;
            for (const Opponent& o : ctx.opponents) {
                double p = win_prob(next, o.rating);
                var_a += o.games * p * (1.0 - p);
            }
            return {next, std::sqrt(var_a) / s_final, t, expected_score(next, ctx.opponents),
                    s_final};
        }
        (e < ctx.actual_score ? lo : hi) = r;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        r = next;
    }
    throw NonConvergenceError("sc_update_uninformative did not converge", r, max_iters);
}

double variance_moving_average(double sigma_prev, double m, double n_t, double delta_r) {
    if (!(m > 0.0)) throw std::invalid_argument("memory length m must be > 0");
    if (n_t < 0.0) throw std::invalid_argument("n_t must be >= 0");
    return std::sqrt((n_t * delta_r * delta_r + m * sigma_prev * sigma_prev) / (n_t + m));
}

double variance_binomial(double sigma_prev, double r_new, std::span<const Opponent> opponents) {
    double var_a = 0.0, games = 0.0;
    for (const Opponent& o : opponents) {
        double p = win_prob(r_new, o.rating);
        var_a += o.games * p * (1.0 - p);
        games += o.games;
    }
    if (!(games > 0.0)) throw std::invalid_argument("needs at least one game");
    double k = kBeta * sigma_prev * sigma_prev;
    double s = kBeta * var_a;
    return k * std::sqrt(var_a) / (1.0 + k * s);
}

GridMoments posterior_grid_moments(std::span<const OpponentRecord> records, int grid_n,
                                   double pad) {
    if (grid_n < 100) throw std::invalid_argument("grid_n must be >= 100");
    if (records.empty()) throw std::invalid_argument("needs at least one game");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    double games = 0.0;
    for (const OpponentRecord& rec : records) {
        lo = std::min(lo, rec.rating);
        hi = std::max(hi, rec.rating);
        games += rec.wins + rec.draws + rec.losses;
    }
    if (!(games > 0.0)) throw std::invalid_argument("needs at least one game");
    lo -= pad;
    hi += pad;
    double step = (hi - lo) / (grid_n - 1);
    std::vector<double> logq(grid_n, 0.0);
    double peak = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_n; ++i) {
        double r = lo + i * step;
        double lq = 0.0;
        for (const OpponentRecord& rec : records) {
            double p = win_prob(r, rec.rating);
            lq += (rec.wins + 0.5 * rec.draws) * std::log(p) +
                  (rec.losses + 0.5 * rec.draws) * std::log1p(-p);
        }
        logq[i] = lq;
        peak = std::max(peak, lq);
    }
    double q0 = 0.0, q1 = 0.0, q2 = 0.0;
    for (int i = 0; i < grid_n; ++i) {
        double r = lo + i * step;
        double q = std::exp(logq[i] - peak);
        q0 += q;
        q1 += q * r;
        q2 += q * r * r;
    }
    if (!(q0 > 0.0) || !std::isfinite(q0))
        throw std::runtime_error("posterior mass vanished on the grid");
    double mean = q1 / q0;
    double var = std::max(q2 / q0 - mean * mean, 0.0);
    return {mean, std::sqrt(var)};
}

}  // namespace scelo
