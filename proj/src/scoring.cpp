#include "scelo/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "scelo/probability.hpp"

namespace scelo {

double margin_prob(double s_x, double s_y, const MarginPolicy& policy) {
    if (!(s_x >= s_y)) throw std::invalid_argument("call margin_prob with the winner's score first");
    double delta;
    if (policy.mode == DeltaMode::Fixed) {
        delta = policy.value;
    } else {
        delta = policy.value * std::sqrt(0.5 * (s_x * s_x + s_y * s_y));
    }
    if (!(delta > 0.0))
        throw std::invalid_argument("margin noise scale delta must be > 0");
    double d2 = (s_x - s_y) * (s_x - s_y);
    return (d2 + delta * delta) / (d2 + 2.0 * delta * delta);
}

double weighted_actual_score(std::span<const ScoredGame> games, const MarginPolicy& policy) {
    double a = 0.0;
    for (const ScoredGame& g : games) {
        if (g.own >= g.opp) a += margin_prob(g.own, g.opp, policy);
        else a += 1.0 - margin_prob(g.opp, g.own, policy);
    }
    return a;
}

double margin_reward(double n) {
    if (n < 0.0) throw std::invalid_argument("margin must be >= 0; negate for the loser");
    return (n + 1.0) / (n + 2.0);
}

double ecf_game_score(double r_x, double r_y, EcfOutcome outcome) {
    switch (outcome) {
        case EcfOutcome::Win: return std::max(r_y + 50.0, r_x + 10.0);
        case EcfOutcome::Loss: return std::min(r_y - 50.0, r_x - 10.0);
        case EcfOutcome::Draw: return r_y;
    }
    throw std::invalid_argument("invalid outcome");
}

double ecf_to_elo(double b) {
    if (!(std::abs(b) < 40.0))
        throw std::invalid_argument("conversion is valid only for |B| < 40 ECF points");
    return advantage_from_prob(0.5 + b / 100.0);
}

double elo_to_ecf(double a) {
    double p = win_prob(a, 0.0);
    if (!(p > 0.1 && p < 0.9))
        throw std::invalid_argument(
            "conversion is valid only for |B| < 40, i.e. win probability in (0.1, 0.9)");
    return 100.0 * (p - 0.5);
}

EcfResult ecf_fit(std::span<const EcfEdge> edges, double target_mean, double tol, double damping,
                  int max_iters) {
    if (edges.empty()) throw std::invalid_argument("needs at least one edge");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    // Reuse the least-squares relaxation on ECF advantages of 100 (P - 1/2).
    std::vector<AdvantageEdge> adv;
    adv.reserve(edges.size());
    EcfResult result;
    for (const EcfEdge& e : edges) {
        if (!(e.p_ij > 0.0 && e.p_ij < 1.0))
            throw std::invalid_argument("edge probability must lie strictly in (0,1)");
        if (!(e.p_ij > 0.1 && e.p_ij < 0.9)) result.out_of_range.push_back({e.i, e.j});
        adv.push_back({e.i, e.j, 100.0 * (e.p_ij - 0.5), 1.0});
    }
    LlsConfig cfg;
    cfg.tol = tol;
    cfg.damping = damping;
    cfg.max_iters = max_iters;
    cfg.target_mean = target_mean;
    LlsResult lls = fit_lls(adv, cfg);
    result.ratings = std::move(lls.ratings);
    result.iterations = lls.iterations;
    result.components = std::move(lls.components);
    return result;
}

}  // namespace scelo
