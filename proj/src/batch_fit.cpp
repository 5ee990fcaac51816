#include "scelo/batch_fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "scelo/probability.hpp"

namespace scelo {

namespace {

struct Neighbour {
    std::size_t index;
    double games;
};

struct Workspace {
    std::vector<double> mu, k, actual;
    std::vector<std::vector<Neighbour>> adj;
};

Workspace prepare(const TournamentGraph& graph) {
    const auto& players = graph.players();
    Workspace w;
    w.mu.resize(players.size());
    w.k.resize(players.size());
    w.actual.assign(players.size(), 0.0);
    w.adj.resize(players.size());
    std::map<Identity, std::size_t> index;
    for (std::size_t n = 0; n < players.size(); ++n) {
        index.emplace(players[n], n);
        const RatingEstimate& prior = graph.prior(players[n]);
        w.mu[n] = prior.mu;
        w.k[n] = prior.k();
    }
    for (const ComparisonEdge& e : graph.edges()) {
        std::size_t a = index.at(e.i), b = index.at(e.j);
        w.actual[a] += e.weighted_score_i;
        w.actual[b] += e.weighted_score_j();
        w.adj[a].push_back({b, e.games()});
        w.adj[b].push_back({a, e.games()});
    }
    return w;
}

}  // namespace

BatchResult fit_pml(const TournamentGraph& graph, const BatchConfig& cfg) {
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    if (!(cfg.damping > 0.0 && cfg.damping <= 1.0))
        throw std::invalid_argument("damping must be in (0,1]");
    Workspace w = prepare(graph);
    const auto& players = graph.players();
    if (cfg.target_mean) {
        for (std::size_t n = 0; n < players.size(); ++n)
            if (w.k[n] == 0.0)
                throw std::invalid_argument(
                    "target_mean shift would move frozen players; drop one or the other");
    }

    std::vector<double> r = w.mu;
    std::vector<double> next(r.size());
    int iterations = 0;
    bool converged = false;
    double last_worst = 0.0;
    for (int t = 1; t <= cfg.max_iters; ++t) {
        double worst = 0.0;
        for (std::size_t n = 0; n < r.size(); ++n) {
            if (w.k[n] == 0.0) {
                next[n] = r[n];
                continue;
            }
            double e = 0.0, s = 0.0;
            for (const Neighbour& nb : w.adj[n]) {
                double p = win_prob(r[n], r[nb.index]);
                e += nb.games * p;
                s += nb.games * p * (1.0 - p);
            }
            s *= kBeta;
            double hat = (w.mu[n] + w.k[n] * (w.actual[n] - e + s * r[n])) / (1.0 + s * w.k[n]);
            if (cfg.rating_floor) hat = std::max(hat, *cfg.rating_floor);
            worst = std::max(worst, std::abs(hat - r[n]));
            double stepped = cfg.damping * hat + (1.0 - cfg.damping) * r[n];
            if (cfg.rating_floor) stepped = std::max(stepped, *cfg.rating_floor);
            next[n] = stepped;
        }
        r.swap(next);
        iterations = t;
        last_worst = worst;
        if (worst < cfg.tol) {
            converged = true;
            break;
        }
    }

    BatchResult result;
    result.iterations = iterations;
    result.converged = converged;
    result.max_residual = last_worst;
    if (converged && cfg.target_mean && !r.empty()) {
        double mean = 0.0;
        for (double v : r) mean += v;
        mean /= static_cast<double>(r.size());
        result.shift_applied = *cfg.target_mean - mean;
        for (double& v : r) v += result.shift_applied;
    }
    for (std::size_t n = 0; n < players.size(); ++n) result.ratings.emplace(players[n], r[n]);
    if (!converged)
        throw BatchNonConvergence("fit_pml did not converge within " +
                                      std::to_string(cfg.max_iters) + " iterations",
                                  std::move(result));
    return result;
}

std::map<Identity, double> classic_batch_update(const TournamentGraph& graph) {
    Workspace w = prepare(graph);
    const auto& players = graph.players();
    std::map<Identity, double> out;
    for (std::size_t n = 0; n < players.size(); ++n) {
        double e = 0.0;
        for (const Neighbour& nb : w.adj[n]) e += nb.games * win_prob(w.mu[n], w.mu[nb.index]);
        out.emplace(players[n], w.mu[n] + w.k[n] * (w.actual[n] - e));
    }
    return out;
}

double rating_sum_delta(const std::map<Identity, double>& before,
                        const std::map<Identity, double>& after) {
    if (before.size() != after.size())
        throw std::invalid_argument("rating maps cover different players");
    double delta = 0.0;
    for (const auto& [id, r_before] : before) {
        auto it = after.find(id);
        if (it == after.end())
            throw std::invalid_argument("rating maps cover different players: " + id.display());
        delta += it->second - r_before;
    }
    return delta;
}

double expected_sum_change(double k_a, double k_b, double q, double f) {
    return (k_b - k_a) * ((1.0 - f) * q - f * (1.0 - q));
}

}  // namespace scelo
