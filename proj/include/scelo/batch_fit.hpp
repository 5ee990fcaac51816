#pragma once

#include <map>
#include <optional>

#include "scelo/types.hpp"

namespace scelo {

struct BatchConfig {
    double tol = 0.05;
    int max_iters = 100000;
    double damping = 0.5;
    std::optional<double> target_mean;   // uniform post-shift; rejected with frozen players
    std::optional<double> rating_floor;  // clamp applied during iteration when set
};

struct BatchResult {
    std::map<Identity, double> ratings;
    int iterations = 0;
    bool converged = false;
    double shift_applied = 0.0;
    double max_residual = 0.0;  // worst per-player |change| of the last sweep
};

class BatchNonConvergence : public std::runtime_error {
  public:
    BatchNonConvergence(const std::string& what, BatchResult last)
        : std::runtime_error(what), last(std::move(last)) {}
    BatchResult last;
};

/// Posterior-maximum-likelihood fit of all ratings at once: each player's
/// rating satisfies R_i = mu_i + K_i (A_i - E_i(R_1..R_M)) at convergence,
/// with expectations recomputed from the full previous iterate every sweep
/// (Jacobi order, so runs are reproducible). Frozen players (sigma = 0)
/// keep their prior exactly; so do isolated players with no games.
BatchResult fit_pml(const TournamentGraph& graph, const BatchConfig& cfg = {});

/// One simultaneous sweep of classic updates, R_i = mu_i + K_i (A_i - E_i(mu)).
/// With equal K everywhere this preserves the rating sum exactly.
std::map<Identity, double> classic_batch_update(const TournamentGraph& graph);

/// Sum of ratings after minus before. Diagnostic for the constant-sum
/// behaviour; the two maps must cover the same players.
double rating_sum_delta(const std::map<Identity, double>& before,
                        const std::map<Identity, double>& after);

/// Expected change of the two-player rating sum per game when the model
/// says A wins with probability q but the observed frequency is f:
/// (K_b - K_a) ((1-f) q - f (1-q)). Positive drift needs K_b > K_a and q > f.
double expected_sum_change(double k_a, double k_b, double q, double f);

}  // namespace scelo
