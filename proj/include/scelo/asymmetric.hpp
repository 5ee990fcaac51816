#pragma once

#include <map>
#include <string>

#include "scelo/batch_fit.hpp"
#include "scelo/lls_fit.hpp"
#include "scelo/types.hpp"

namespace scelo {

enum class Fitter { PML, LLS };

struct RoleFitConfig {
    Fitter fitter = Fitter::LLS;
    BatchConfig pml;
    LlsConfig lls;
    double prior_weight = 0.1;
    MomentMethod method = MomentMethod::Approx;
};

/// One rating per (agent, role); centered so all ratings sum to zero.
/// role_p is the lexicographically first of the two role tags.
struct RoleRatings {
    std::string role_p;
    std::string role_g;
    std::map<std::string, double> rp;
    std::map<std::string, double> rg;
    std::vector<std::string> diagnostics;  // unbalanced-schedule warnings
};

/// Fits the 2N role-split ratings with the chosen estimator. Every edge
/// must pair the two roles; contests within a role are rejected. An
/// unbalanced schedule fits anyway, with a diagnostic per uneven player.
RoleRatings fit_role_ratings(const TournamentGraph& graph, const RoleFitConfig& cfg = {});

struct AnovaResult {
    double rho;                              // side advantage of role_p
    std::map<std::string, double> overall;   // R_i = (RP_i + RG_i)/2
    std::map<std::string, double> residual;  // rho_i = (RP_i - RG_i)/2 - rho
};

/// Two-way decomposition: rho = (mean RP - mean RG)/2, per-agent overall
/// rating, and the idiosyncratic residual. Requires both roles fitted for
/// every agent.
AnovaResult anova(const RoleRatings& rr);

/// Same decomposition with the role means weighted by per-agent game
/// counts; only rho (and hence the residuals) changes.
AnovaResult anova_weighted(const RoleRatings& rr, const std::map<std::string, double>& games_p,
                           const std::map<std::string, double>& games_g);

}  // namespace scelo
