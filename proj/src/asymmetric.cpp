#include "scelo/asymmetric.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace scelo {

namespace {

AnovaResult decompose(const RoleRatings& rr, double mean_p, double mean_g) {
    AnovaResult res;
    res.rho = 0.5 * (mean_p - mean_g);
    for (const auto& [player, rp] : rr.rp) {
        auto it = rr.rg.find(player);
        if (it == rr.rg.end())
            throw std::invalid_argument("player " + player + " has no " + rr.role_g + " rating");
        res.overall[player] = 0.5 * (rp + it->second);
        res.residual[player] = 0.5 * (rp - it->second) - res.rho;
    }
    for (const auto& [player, rg] : rr.rg)
        if (!rr.rp.count(player))
            throw std::invalid_argument("player " + player + " has no " + rr.role_p + " rating");
    return res;
}

}  // namespace

RoleRatings fit_role_ratings(const TournamentGraph& graph, const RoleFitConfig& cfg) {
    std::set<std::string> roles;
    for (const Identity& id : graph.players()) roles.insert(id.role);
    if (roles.size() != 2)
        throw std::invalid_argument("role fitting needs exactly two roles, found " +
                                    std::to_string(roles.size()));
    for (const ComparisonEdge& e : graph.edges())
        if (e.i.role == e.j.role)
            throw std::invalid_argument("contests are only possible across roles: " +
                                        e.i.display() + " vs " + e.j.display());

    std::map<Identity, double> fitted;
    if (cfg.fitter == Fitter::PML) {
        fitted = fit_pml(graph, cfg.pml).ratings;
    } else {
        auto edges = build_advantage_graph(graph, cfg.prior_weight, cfg.method);
        fitted = fit_lls(edges, cfg.lls).ratings;
    }

    double mean = 0.0;
    for (const auto& [id, r] : fitted) mean += r;
    mean /= static_cast<double>(fitted.size());

    RoleRatings rr;
    rr.role_p = *roles.begin();
    rr.role_g = *std::next(roles.begin());
    for (const auto& [id, r] : fitted) {
        if (id.role == rr.role_p) rr.rp[id.player] = r - mean;
        else rr.rg[id.player] = r - mean;
    }

    // Balanced-design check: per player, games in each role.
    std::map<Identity, double> games;
    for (const ComparisonEdge& e : graph.edges()) {
        games[e.i] += e.games();
        games[e.j] += e.games();
    }
    for (const auto& [player, unused] : rr.rp) {
        double gp = games.count({player, rr.role_p}) ? games.at({player, rr.role_p}) : 0.0;
        double gg = games.count({player, rr.role_g}) ? games.at({player, rr.role_g}) : 0.0;
        if (gp != gg)
            rr.diagnostics.push_back("unbalanced schedule for " + player + ": " +
                                     std::to_string(gp) + " games as " + rr.role_p + ", " +
                                     std::to_string(gg) + " as " + rr.role_g);
    }
    return rr;
}

AnovaResult anova(const RoleRatings& rr) {
    if (rr.rp.empty() || rr.rg.empty()) throw std::invalid_argument("role ratings are empty");
    double mean_p = 0.0, mean_g = 0.0;
    for (const auto& [player, r] : rr.rp) mean_p += r;
    for (const auto& [player, r] : rr.rg) mean_g += r;
    mean_p /= static_cast<double>(rr.rp.size());
    mean_g /= static_cast<double>(rr.rg.size());
    return decompose(rr, mean_p, mean_g);
}

AnovaResult anova_weighted(const RoleRatings& rr, const std::map<std::string, double>& games_p,
                           const std::map<std::string, double>& games_g) {
    if (rr.rp.empty() || rr.rg.empty()) throw std::invalid_argument("role ratings are empty");
    double num_p = 0.0, den_p = 0.0, num_g = 0.0, den_g = 0.0;
    for (const auto& [player, r] : rr.rp) {
        double w = games_p.count(player) ? games_p.at(player) : 0.0;
        num_p += w * r;
        den_p += w;
    }
    for (const auto& [player, r] : rr.rg) {
        double w = games_g.count(player) ? games_g.at(player) : 0.0;
        num_g += w * r;
        den_g += w;
    }
    if (!(den_p > 0.0) || !(den_g > 0.0))
        throw std::invalid_argument("weighted anova needs positive game counts in both roles");
    return decompose(rr, num_p / den_p, num_g / den_g);
}

}  // namespace scelo
