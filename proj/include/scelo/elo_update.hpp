#pragma once

#include <span>
#include <vector>

#include "scelo/types.hpp"

namespace scelo {

/// A block of games against one opponent at a fixed rating.
struct Opponent {
    double rating;
    double games;
};

/// Input to a single-player update: the prior belief, the opposition, and
/// the actual score A (sum of the per-game w values: 1/0.5/0, or
/// margin-weighted fractions).
struct UpdateContext {
    RatingEstimate prior;
    std::vector<Opponent> opponents;
    double actual_score = 0.0;

    double total_games() const;
};

struct UpdateResult {
    double rating;
    double sigma;
    int iterations;
    double expected_score;  // E at the returned rating
    double slope;           // dE/dr at the returned rating
};

/// E(r) = sum_i games_i * win_prob(r, r_i).
double expected_score(double r, std::span<const Opponent> opponents);

/// dE/dr = beta * sum_i games_i * p_i(r) * (1 - p_i(r)).
double expected_score_slope(double r, std::span<const Opponent> opponents);

/// Classic update R = mu + K (A - E(mu)); sigma passes through unchanged.
/// Overshoots for large tournaments since E is held at the prior rating.
UpdateResult classic_update(const UpdateContext& ctx);

/// Self-consistent update: the fixed point of R = mu + K (A - E(R)),
/// solved by a slope-corrected step averaged with the previous iterate.
/// The weight on the new estimate is `damping`. Throws NonConvergenceError
/// past `max_iters`.
UpdateResult sc_update(const UpdateContext& ctx, double tol = 0.05, double damping = 0.5,
                       int max_iters = 10000);

/// Flat-prior limit of sc_update: converges to the rating that reproduces
/// the observed score exactly, E(R) = A. Requires 0 < A < N; an all-win or
/// all-loss record has no finite solution and is rejected.
UpdateResult sc_update_uninformative(const UpdateContext& ctx, double tol = 0.05,
                                     int max_iters = 10000);

/// Exponentially weighted moving-average variance update:
/// sigma^2 <- (n_t dR^2 + m sigma_prev^2) / (n_t + m). Returns the new sigma.
double variance_moving_average(double sigma_prev, double m, double n_t, double delta_r);

/// Binomial lower bound on the posterior rating uncertainty,
/// sigma_t = K sigma[A|R] / (1 + K s), evaluated at the updated rating.
double variance_binomial(double sigma_prev, double r_new, std::span<const Opponent> opponents);

/// Win/draw/loss tallies against one fixed-rated opponent.
struct OpponentRecord {
    double rating;
    double wins = 0.0;
    double draws = 0.0;
    double losses = 0.0;
};

struct GridMoments {
    double mean;
    double sigma;
};

/// First and second moments of the single-player posterior (flat prior,
/// product of game likelihoods) evaluated on grid_n evenly spaced ratings
/// spanning [min opponent - pad, max opponent + pad].
GridMoments posterior_grid_moments(std::span<const OpponentRecord> records, int grid_n = 100,
                                   double pad = 200.0);

}  // namespace scelo
