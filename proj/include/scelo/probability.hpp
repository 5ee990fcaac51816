#pragma once

#include <span>

#include "scelo/types.hpp"

namespace scelo {

/// Probability that a player rated r_a beats one rated r_b:
/// 1 / (1 + 10^((r_b - r_a)/400)).
double win_prob(double r_a, double r_b);

/// Elo advantage implied by a win probability: (1/beta) * ln(p/(1-p)).
/// Inverse of win_prob differences. Rejects p in {0, 1}.
double advantage_from_prob(double p);

/// Beta posterior over a win probability after `wins` and `losses`
/// observations, with a symmetric prior pseudo-count on each side.
struct BetaPosterior {
    double alpha;
    double beta_param;
    double prior_weight;

    double mean() const { return alpha / (alpha + beta_param); }
    double variance() const {
        double s = alpha + beta_param;
        return alpha * beta_param / (s + 1.0) / (s * s);
    }
};
BetaPosterior beta_posterior(double wins, double losses, double prior_weight = 1.0);

/// Dirichlet posterior over win/draw/loss probabilities. Strictly interior
/// for any non-negative counts, so the log-odds stay finite even for
/// all-draw or all-win records.
struct WdlPosterior {
    double w;
    double d;
    double l;

    double alpha_ij() const;  // ln(W/L)
    double beta_ij() const;   // ln(D/(1-D))
};
WdlPosterior wdl_posterior(double n_w, double n_d, double n_l);

enum class MomentMethod { Approx, Numeric };

/// Mean and spread of the posterior Elo advantage, in Elo points.
struct AdvantageMoments {
    double mean;
    double stdev;
    MomentMethod method;
};

/// One-sigma propagation: maps the beta posterior's [mu-sigma, mu+sigma]
/// probability window through advantage_from_prob and returns midpoint and
/// half-range. Rejects when the window leaves (0,1), which cannot happen
/// at prior_weight 1.
AdvantageMoments advantage_moments_approx(double wins, double losses, double prior_weight = 1.0);

/// Midpoint-rule integration of the advantage over the beta posterior on an
/// open grid in (0,1); first moment for the mean, second for the spread.
AdvantageMoments advantage_moments_numeric(double wins, double losses, int grid = 100,
                                           double prior_weight = 1.0);

/// Power mean (sum_i w_i x_i^d / sum_i w_i)^(1/d); the d->0 limit is the
/// weighted geometric mean, d=-1 harmonic, d=1 arithmetic, d=2 RMS.
double generalized_average(std::span<const double> values, std::span<const double> weights,
                           double d);

/// Rating equivalent to a mixture of capabilities against one opponent:
/// averages the win probabilities arithmetically and converts back.
double elo_average(double opponent, std::span<const double> component_ratings);

/// Average Elo improvement implied by a win-rate change from p1 to p2
/// against a fixed reference population.
double population_improvement(double p1, double p2);

/// Smallest number of games N for which the expected win-fraction excess
/// over an even match is at least k_sigma standard deviations of the
/// difference (variances of the two observed fractions summed).
long long required_sample_size(double advantage, double k_sigma);

}  // namespace scelo
