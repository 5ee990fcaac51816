#pragma once

#include <map>
#include <span>
#include <vector>

#include "scelo/lls_fit.hpp"
#include "scelo/types.hpp"

namespace scelo {

enum class DeltaMode { Fixed, RmsFraction };

/// Noise scale for margin-of-victory scoring. RmsFraction sets delta to
/// value * RMS of the two scores of that game; Fixed uses value directly.
struct MarginPolicy {
    DeltaMode mode = DeltaMode::RmsFraction;
    double value = 0.1;
};

/// Rematch win probability from a score margin:
/// P = (D^2 + delta^2) / (D^2 + 2 delta^2) with D = s_x - s_y >= 0.
/// Always in [0.5, 1). Call with the winner's score first.
double margin_prob(double s_x, double s_y, const MarginPolicy& policy);

struct ScoredGame {
    double own;
    double opp;
};

/// Margin-weighted actual score A: wins contribute their rematch
/// probability, losses the complement.
double weighted_actual_score(std::span<const ScoredGame> games, const MarginPolicy& policy);

/// Reward transform for a winning margin of n: z = (n+1)/(n+2). A half-point
/// win maps to 0.6; the loser's reward is the caller's negation.
double margin_reward(double n);

enum class EcfOutcome { Win, Draw, Loss };

/// ECF game score for X against an opponent rated r_y: a win scores 50 over
/// the opponent but never below r_x + 10, a loss mirrors that, a draw
/// scores the opponent's rating.
double ecf_game_score(double r_x, double r_y, EcfOutcome outcome);

/// ECF advantage B <-> Elo advantage A via p = 1/2 + B/100. Valid only for
/// |B| < 40, i.e. win probability in (0.1, 0.9).
double ecf_to_elo(double b);
double elo_to_ecf(double a);

struct EcfEdge {
    Identity i;
    Identity j;
    double p_ij;  // probability that i outscores j
};

struct EcfResult {
    std::map<Identity, double> ratings;
    int iterations = 0;
    std::vector<std::vector<Identity>> components;
    std::vector<std::pair<Identity, Identity>> out_of_range;  // edges with p outside (0.1, 0.9)
};

/// Expected-score ECF ratings: solves R_i = mean_j (R_j + (2 P_ij - 1) * 50)
/// by the same damped relaxation as fit_lls, then shifts each component to
/// target_mean. Edges outside the valid probability band are still used but
/// flagged.
EcfResult ecf_fit(std::span<const EcfEdge> edges, double target_mean, double tol = 0.01,
                  double damping = 0.5, int max_iters = 100000);

}  // namespace scelo
