#pragma once

#include <map>
#include <span>
#include <vector>

#include "scelo/probability.hpp"
#include "scelo/types.hpp"

namespace scelo {

/// Posterior log-odds advantage of i over j, in Elo points, with its
/// statistical uncertainty. Finite for any observed counts, including a
/// single game or an all-wins record.
struct AdvantageEdge {
    Identity i;
    Identity j;
    double a_ij;      // mean advantage; a_ji = -a_ij
    double sigma_ij;  // > 0
};

struct LlsConfig {
    double tol = 0.05;
    double damping = 0.5;
    int max_iters = 100000;
    double target_mean = kDefaultMean;
    bool allow_components = true;  // fit disconnected graphs per component
};

struct UncertaintyParts {
    double total;
    double statistical;
    double structural;
};

struct LlsResult {
    std::map<Identity, double> ratings;
    std::map<Identity, UncertaintyParts> uncertainty;
    int iterations = 0;
    double shift_applied = 0.0;
    double max_residual = 0.0;  // worst per-player |change| of the last sweep
    // One entry per connected component; more than one is the disconnected-
    // graph warning, with each component listed.
    std::vector<std::vector<Identity>> components;
};

/// Converts each comparison edge into an advantage edge via the beta
/// posterior, draws counting as half a win and half a loss on each side.
/// Uses the one-sigma approximation where its probability window stays
/// inside (0,1) and falls back to numerical integration otherwise (the
/// approximation window can escape for lopsided edges at low prior weight).
std::vector<AdvantageEdge> build_advantage_graph(const TournamentGraph& graph,
                                                 double prior_weight = 0.1,
                                                 MomentMethod method = MomentMethod::Approx);

/// Least-squares ratings: each R_i converges to the average over incident
/// edges of R_j + A_ij, then every connected component is shifted so its
/// mean rating equals target_mean. Throws when the graph is disconnected
/// and allow_components is off, naming the components.
LlsResult fit_lls(std::span<const AdvantageEdge> edges, const LlsConfig& cfg = {});

/// Precision-weighted variant: each sweep replaces R_i with the precision-
/// weighted average of its current value (precision 1/sigma_i^2) and the
/// per-edge observations (precision 1/(sigma_j^2 + sigma_ij^2)), starting
/// from the prior means. High-precision players barely move per sweep;
/// diffuse ones chase their edges. Frozen priors (sigma = 0) are never
/// adjusted, and no mean shift is applied since the priors pin the scale.
LlsResult fit_lls_weighted(std::span<const AdvantageEdge> edges,
                           const std::map<Identity, RatingEstimate>& priors,
                           const LlsConfig& cfg = {});

/// Per-player split of the rating error into the statistical part (mean of
/// sigma_ij^2 over incident edges) and the structural part (mean squared
/// advantage residual). Players without incident edges are absent.
std::map<Identity, UncertaintyParts> uncertainty_decomposition(
    const std::map<Identity, double>& ratings, std::span<const AdvantageEdge> edges);

/// Well-ordering diagnostic for a triple:
/// C = (A_ij + A_jk - A_ik)^2 / (sigma_ij^2 + sigma_jk^2 + sigma_ik^2).
double consistency_measure(double a_ij, double a_jk, double a_ik, double sigma_ij, double sigma_jk,
                           double sigma_ik);

/// sum(x_i / sigma_i^2) / sum(1 / sigma_i^2).
double precision_weighted_average(std::span<const double> values, std::span<const double> sigmas);

/// Recursive whole-history estimate: at each tournament, every player's
/// rating becomes the precision-weighted average of its previous estimate
/// (precision 1/process_sigma^2) and the edge observations. Each state is a
/// sufficient summary; no history is replayed. Frozen priors stay fixed.
std::vector<std::map<Identity, double>> whole_history_filter(
    std::span<const std::vector<AdvantageEdge>> tournaments,
    const std::map<Identity, RatingEstimate>& priors, double process_sigma);

}  // namespace scelo
