#include "scelo/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace scelo {

RatingEstimate RatingEstimate::from_k(double mu, double k) {
    if (!(k >= 0.0)) throw std::invalid_argument("adjustment factor K must be >= 0");
    return {mu, std::sqrt(k / kBeta)};
}

const RatingEstimate& TournamentGraph::prior(const Identity& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::invalid_argument("unknown player: " + id.display());
    return priors_[it->second];
}

void TournamentGraph::set_prior(const Identity& id, RatingEstimate prior) {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::invalid_argument("unknown player: " + id.display());
    if (prior.sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
    priors_[it->second] = prior;
}

void TournamentGraph::set_player_prior(const std::string& player, RatingEstimate prior) {
    bool found = false;
    for (std::size_t n = 0; n < players_.size(); ++n) {
        if (players_[n].player == player) {
            priors_[n] = prior;
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("unknown player: " + player);
}

void TournamentGraph::add_player(const Identity& id, RatingEstimate prior) {
    if (id.player.empty()) throw std::invalid_argument("player id must be non-empty");
    if (index_.count(id)) return;
    index_.emplace(id, players_.size());
    players_.push_back(id);
    priors_.push_back(prior);
}

void TournamentGraph::add_result(const Identity& a, const Identity& b, Outcome outcome_for_a) {
    if (a == b) throw std::invalid_argument("a comparison needs two distinct identities");
    add_player(a);
    add_player(b);
    // Endpoints are stored in identity order so aggregation does not depend
    // on which record arrived first.
    bool a_is_i = a < b;
    const Identity& lo = a_is_i ? a : b;
    const Identity& hi = a_is_i ? b : a;
    std::size_t ka = index_.at(a), kb = index_.at(b);
    auto key = std::make_pair(std::min(ka, kb), std::max(ka, kb));
    auto it = edge_index_.find(key);
    if (it == edge_index_.end()) {
        it = edge_index_.emplace(key, edges_.size()).first;
        edges_.push_back(ComparisonEdge{lo, hi, 0.0, 0.0, 0.0, 0.0});
    }
    ComparisonEdge& e = edges_[it->second];
    double w_i;  // score of the canonical i endpoint
    switch (outcome_for_a) {
        case Outcome::AWins: w_i = a_is_i ? 1.0 : 0.0; break;
        case Outcome::BWins: w_i = a_is_i ? 0.0 : 1.0; break;
        case Outcome::Draw: w_i = 0.5; break;
    }
    if (w_i == 1.0) e.wins_i += 1.0;
    else if (w_i == 0.0) e.wins_j += 1.0;
    else e.draws += 1.0;
    e.weighted_score_i += w_i;
}

double TournamentGraph::total_games() const {
    double n = 0.0;
    for (const auto& e : edges_) n += e.games();
    return n;
}

TournamentGraph build_graph(std::span<const GameRecord> records, const BuildOptions& opts) {
    if (records.empty()) throw std::invalid_argument("no game records");
    std::set<std::string> seen;
    TournamentGraph g;
    for (const GameRecord& r : records) {
        if (!r.game_id.empty() && !seen.insert(r.game_id).second)
            throw std::invalid_argument("duplicate game_id: " + r.game_id);
        Identity ia{r.a.player, opts.role_split ? r.a.role : std::string{}};
        Identity ib{r.b.player, opts.role_split ? r.b.role : std::string{}};
        if (r.a.player == r.b.player && r.a.role == r.b.role)
            throw std::invalid_argument("self-play requires distinct roles: " + r.game_id);
        if (ia == ib)
            throw std::invalid_argument(
                "self-play record needs role_split to form two nodes: " + r.game_id);
        g.add_result(ia, ib, r.outcome);
    }
    return g;
}

}  // namespace scelo
