#include "scelo/lls_fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace scelo {

namespace {

struct SignedEdge {
    std::size_t other;
    double advantage;
    double sigma_other;  // prior sigma of the neighbour (weighted fit only)
    double sigma_edge;
};

struct Indexed {
    std::vector<Identity> ids;
    std::map<Identity, std::size_t> index;
    std::vector<std::vector<SignedEdge>> adj;
};

Indexed index_edges(std::span<const AdvantageEdge> edges) {
    if (edges.empty()) throw std::invalid_argument("needs at least one advantage edge");
    Indexed ix;
    auto intern = [&](const Identity& id) {
        auto it = ix.index.find(id);
        if (it != ix.index.end()) return it->second;
        ix.index.emplace(id, ix.ids.size());
        ix.ids.push_back(id);
        ix.adj.emplace_back();
        return ix.ids.size() - 1;
    };
    for (const AdvantageEdge& e : edges) {
        if (!(e.sigma_ij > 0.0)) throw std::invalid_argument("edge sigma must be > 0");
        std::size_t a = intern(e.i), b = intern(e.j);
        if (a == b) throw std::invalid_argument("advantage edge endpoints must differ");
        ix.adj[a].push_back({b, e.a_ij, 0.0, e.sigma_ij});
        ix.adj[b].push_back({a, -e.a_ij, 0.0, e.sigma_ij});
    }
    return ix;
}

std::vector<std::vector<Identity>> find_components(const Indexed& ix,
                                                   std::vector<int>& component_of) {
    component_of.assign(ix.ids.size(), -1);
    std::vector<std::vector<Identity>> components;
    for (std::size_t start = 0; start < ix.ids.size(); ++start) {
        if (component_of[start] >= 0) continue;
        int c = static_cast<int>(components.size());
        components.emplace_back();
        std::vector<std::size_t> stack{start};
        component_of[start] = c;
        while (!stack.empty()) {
            std::size_t n = stack.back();
            stack.pop_back();
            components[c].push_back(ix.ids[n]);
            for (const SignedEdge& e : ix.adj[n]) {
                if (component_of[e.other] < 0) {
                    component_of[e.other] = c;
                    stack.push_back(e.other);
                }
            }
        }
    }
    return components;
}

std::string describe_components(const std::vector<std::vector<Identity>>& components) {
    std::ostringstream msg;
    msg << "graph has " << components.size() << " disconnected components:";
    for (const auto& comp : components) {
        msg << " {";
        for (std::size_t n = 0; n < comp.size(); ++n) {
            if (n) msg << ", ";
            msg << comp[n].display();
        }
        msg << "}";
    }
    return msg.str();
}

}  // namespace

std::vector<AdvantageEdge> build_advantage_graph(const TournamentGraph& graph, double prior_weight,
                                                 MomentMethod method) {
    std::vector<AdvantageEdge> edges;
    edges.reserve(graph.edges().size());
    for (const ComparisonEdge& e : graph.edges()) {
        if (!(e.games() >= 1.0))
            throw std::invalid_argument("edge needs at least one game: " + e.i.display() + " vs " +
                                        e.j.display());
        double wins = e.wins_i + 0.5 * e.draws;
        double losses = e.wins_j + 0.5 * e.draws;
        AdvantageMoments m{0.0, 0.0, method};
        if (method == MomentMethod::Approx) {
            try {
                m = advantage_moments_approx(wins, losses, prior_weight);
            } catch (const std::domain_error&) {
                m = advantage_moments_numeric(wins, losses, 1000, prior_weight);
            }
        } else {
            m = advantage_moments_numeric(wins, losses, 1000, prior_weight);
        }
        edges.push_back({e.i, e.j, m.mean, m.stdev});
    }
    return edges;
}

LlsResult fit_lls(std::span<const AdvantageEdge> edges, const LlsConfig& cfg) {
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    if (!(cfg.damping > 0.0 && cfg.damping <= 1.0))
        throw std::invalid_argument("damping must be in (0,1]");
    Indexed ix = index_edges(edges);
    std::vector<int> component_of;
    auto components = find_components(ix, component_of);
    if (components.size() > 1 && !cfg.allow_components)
        throw std::invalid_argument(describe_components(components));

    std::vector<double> r(ix.ids.size(), 0.0);
    std::vector<double> next(r.size());
    int iterations = 0;
    double last_worst = 0.0;
    for (int t = 1; t <= cfg.max_iters; ++t) {
        double worst = 0.0;
        for (std::size_t n = 0; n < r.size(); ++n) {
            double sum = 0.0;
            for (const SignedEdge& e : ix.adj[n]) sum += r[e.other] + e.advantage;
            double hat = sum / static_cast<double>(ix.adj[n].size());
            worst = std::max(worst, std::abs(hat - r[n]));
            next[n] = cfg.damping * hat + (1.0 - cfg.damping) * r[n];
        }
        r.swap(next);
        iterations = t;
        last_worst = worst;
        if (worst < cfg.tol) break;
        if (t == cfg.max_iters)
            throw NonConvergenceError("fit_lls did not converge", r[0], cfg.max_iters);
    }

    // Shift each component so its mean rating sits at the target.
    std::vector<double> comp_mean(components.size(), 0.0);
    std::vector<std::size_t> comp_size(components.size(), 0);
    for (std::size_t n = 0; n < r.size(); ++n) {
        comp_mean[component_of[n]] += r[n];
        comp_size[component_of[n]] += 1;
    }
    for (std::size_t c = 0; c < components.size(); ++c)
        comp_mean[c] /= static_cast<double>(comp_size[c]);

    LlsResult result;
    result.iterations = iterations;
    result.max_residual = last_worst;
    result.components = std::move(components);
    result.shift_applied = cfg.target_mean - comp_mean[0];
    for (std::size_t n = 0; n < r.size(); ++n) {
        r[n] += cfg.target_mean - comp_mean[component_of[n]];
        result.ratings.emplace(ix.ids[n], r[n]);
    }
    result.uncertainty = uncertainty_decomposition(result.ratings, edges);
    return result;
}

LlsResult fit_lls_weighted(std::span<const AdvantageEdge> edges,
                           const std::map<Identity, RatingEstimate>& priors,
                           const LlsConfig& cfg) {
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    if (!(cfg.damping > 0.0 && cfg.damping <= 1.0))
        throw std::invalid_argument("damping must be in (0,1]");
    Indexed ix = index_edges(edges);
    std::vector<double> mu(ix.ids.size()), sigma(ix.ids.size());
    for (std::size_t n = 0; n < ix.ids.size(); ++n) {
        auto it = priors.find(ix.ids[n]);
        if (it == priors.end())
            throw std::invalid_argument("missing prior for " + ix.ids[n].display());
        mu[n] = it->second.mu;
        sigma[n] = it->second.sigma;
        if (sigma[n] < 0.0) throw std::invalid_argument("sigma must be >= 0");
    }
    for (auto& adj : ix.adj)
        for (SignedEdge& e : adj) e.sigma_other = sigma[e.other];

    std::vector<double> r = mu;
    std::vector<double> next(r.size());
    int iterations = 0;
    double last_worst = 0.0;
    for (int t = 1; t <= cfg.max_iters; ++t) {
        double worst = 0.0;
        for (std::size_t n = 0; n < r.size(); ++n) {
            if (sigma[n] == 0.0) {  // frozen: infinite precision on the prior
                next[n] = r[n];
                continue;
            }
            // The inertia term anchors to the previous iterate, so at the
            // fixed point the neighbours alone determine the rating and a
            // diffuse prior leaves no residual pull.
            double p_i = 1.0 / (sigma[n] * sigma[n]);
            double num = p_i * r[n];
            double den = p_i;
            for (const SignedEdge& e : ix.adj[n]) {
                double p_ij = 1.0 / (e.sigma_other * e.sigma_other + e.sigma_edge * e.sigma_edge);
                num += p_ij * (r[e.other] + e.advantage);
                den += p_ij;
            }
            if (!(den > 0.0))
                throw std::invalid_argument("all precisions vanished for " + ix.ids[n].display());
            double hat = num / den;
            worst = std::max(worst, std::abs(hat - r[n]));
            next[n] = cfg.damping * hat + (1.0 - cfg.damping) * r[n];
        }
        r.swap(next);
        iterations = t;
        last_worst = worst;
        if (worst < cfg.tol) break;
        if (t == cfg.max_iters)
            throw NonConvergenceError("fit_lls_weighted did not converge", r[0], cfg.max_iters);
    }

    LlsResult result;
    result.iterations = iterations;
    result.max_residual = last_worst;
    for (std::size_t n = 0; n < r.size(); ++n) result.ratings.emplace(ix.ids[n], r[n]);
    result.uncertainty = uncertainty_decomposition(result.ratings, edges);
    return result;
}

std::map<Identity, UncertaintyParts> uncertainty_decomposition(
    const std::map<Identity, double>& ratings, std::span<const AdvantageEdge> edges) {
    struct Acc {
        double stat2 = 0.0;
        double struct2 = 0.0;
        int degree = 0;  // incident edges, not games
    };
    std::map<Identity, Acc> acc;
    for (const AdvantageEdge& e : edges) {
        auto ri = ratings.find(e.i);
        auto rj = ratings.find(e.j);
        if (ri == ratings.end() || rj == ratings.end())
            throw std::invalid_argument("ratings must cover all edge endpoints");
        double residual = ri->second - rj->second - e.a_ij;
        for (const Identity* id : {&e.i, &e.j}) {
            Acc& a = acc[*id];
            a.stat2 += e.sigma_ij * e.sigma_ij;
            a.struct2 += residual * residual;
            a.degree += 1;
        }
    }
    std::map<Identity, UncertaintyParts> out;
    for (const auto& [id, a] : acc) {
        double stat2 = a.stat2 / a.degree;
        double struct2 = a.struct2 / a.degree;
        out.emplace(id, UncertaintyParts{std::sqrt(stat2 + struct2), std::sqrt(stat2),
                                         std::sqrt(struct2)});
    }
    return out;
}

double consistency_measure(double a_ij, double a_jk, double a_ik, double sigma_ij, double sigma_jk,
                           double sigma_ik) {
    double denom = sigma_ij * sigma_ij + sigma_jk * sigma_jk + sigma_ik * sigma_ik;
    if (!(denom > 0.0)) throw std::invalid_argument("total variance must be > 0");
    double gap = a_ij + a_jk - a_ik;
    return gap * gap / denom;
}

double precision_weighted_average(std::span<const double> values,
                                  std::span<const double> sigmas) {
    if (values.empty() || values.size() != sigmas.size())
        throw std::invalid_argument("values and sigmas must be non-empty and equal length");
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < values.size(); ++n) {
        if (!(sigmas[n] > 0.0)) throw std::invalid_argument("sigmas must be > 0");
        double p = 1.0 / (sigmas[n] * sigmas[n]);
        num += p * values[n];
        den += p;
    }
    return num / den;
}

std::vector<std::map<Identity, double>> whole_history_filter(
    std::span<const std::vector<AdvantageEdge>> tournaments,
    const std::map<Identity, RatingEstimate>& priors, double process_sigma) {
    if (!(process_sigma > 0.0)) throw std::invalid_argument("process_sigma must be > 0");
    std::map<Identity, RatingEstimate> state = priors;
    double p_process = 1.0 / (process_sigma * process_sigma);
    std::vector<std::map<Identity, double>> out;
    out.reserve(tournaments.size());
    for (const auto& snapshot : tournaments) {
        std::map<Identity, std::vector<std::pair<double, double>>> obs;  // (value, precision)
        for (const AdvantageEdge& e : snapshot) {
            auto pi = state.find(e.i);
            auto pj = state.find(e.j);
            if (pi == state.end() || pj == state.end())
                throw std::invalid_argument("snapshot references a player without a prior");
            double var_edge = e.sigma_ij * e.sigma_ij;
            obs[e.i].push_back({pj->second.mu + e.a_ij,
                                1.0 / (pj->second.sigma * pj->second.sigma + var_edge)});
            obs[e.j].push_back({pi->second.mu - e.a_ij,
                                1.0 / (pi->second.sigma * pi->second.sigma + var_edge)});
        }
        std::map<Identity, RatingEstimate> updated = state;
        for (const auto& [id, samples] : obs) {
            const RatingEstimate& prev = state.at(id);
            if (prev.frozen()) continue;
            double num = p_process * prev.mu;
            double den = p_process;
            for (const auto& [value, precision] : samples) {
                num += precision * value;
                den += precision;
            }
            updated[id] = {num / den, std::sqrt(1.0 / den)};
        }
        state = std::move(updated);
        std::map<Identity, double> snap_out;
        for (const auto& [id, est] : state) snap_out.emplace(id, est.mu);
        out.push_back(std::move(snap_out));
    }
    return out;
}

}  // namespace scelo
