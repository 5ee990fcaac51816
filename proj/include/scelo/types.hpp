#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scelo {

// Elo scale constant: a 400-point gap means 10:1 odds.
inline constexpr double kLn10 = 2.302585092994046;
inline constexpr double kBeta = kLn10 / 400.0;
inline constexpr double kEloPerLogOdds = 400.0 / kLn10;
inline constexpr double kDefaultMean = 1000.0;

/// A rated entity. `role` stays empty unless the tournament is role-split,
/// in which case one player fields one identity per role.
struct Identity {
    std::string player;
    std::string role;

    auto operator<=>(const Identity&) const = default;
    std::string display() const { return role.empty() ? player : player + ":" + role; }
};

/// Rating belief: mean and uncertainty in Elo points. The adjustment
/// factor K = beta * sigma^2 is derived rather than stored, so the two
/// can never drift apart. sigma == 0 marks a frozen/anchor player.
struct RatingEstimate {
    double mu = kDefaultMean;
    double sigma = 0.0;

    double k() const { return kBeta * sigma * sigma; }
    bool frozen() const { return sigma == 0.0; }
    static RatingEstimate from_k(double mu, double k);
};

enum class Outcome { AWins, BWins, Draw };

struct GameSide {
    std::string player;
    std::string role;
};

/// One contest. Scores are optional; pure win/loss/draw data omits them.
struct GameRecord {
    std::string game_id;
    GameSide a;
    GameSide b;
    std::string scenario;
    std::optional<double> score_a;
    std::optional<double> score_b;
    Outcome outcome = Outcome::Draw;
};

/// Aggregated pairwise results. Endpoints are kept in canonical order
/// (i < j); weighted_score_i defaults to wins_i + draws/2.
struct ComparisonEdge {
    Identity i;
    Identity j;
    double wins_i = 0.0;
    double draws = 0.0;
    double wins_j = 0.0;
    double weighted_score_i = 0.0;

    double games() const { return wins_i + draws + wins_j; }
    double weighted_score_j() const { return games() - weighted_score_i; }
};

/// Players plus the aggregated edges among them. Immutable once built;
/// safe to share across threads. At most one edge exists per unordered
/// identity pair.
class TournamentGraph {
  public:
    const std::vector<Identity>& players() const { return players_; }
    const std::vector<ComparisonEdge>& edges() const { return edges_; }

    bool has_player(const Identity& id) const { return index_.count(id) != 0; }
    const RatingEstimate& prior(const Identity& id) const;
    void set_prior(const Identity& id, RatingEstimate prior);
    /// Applies one prior to every identity of `player`, regardless of role.
    void set_player_prior(const std::string& player, RatingEstimate prior);

    void add_player(const Identity& id, RatingEstimate prior = {kDefaultMean, 1000.0});
    void add_result(const Identity& a, const Identity& b, Outcome outcome_for_a);

    double total_games() const;

  private:
    std::vector<Identity> players_;
    std::vector<RatingEstimate> priors_;
    std::map<Identity, std::size_t> index_;
    std::vector<ComparisonEdge> edges_;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_index_;
};

struct BuildOptions {
    bool role_split = false;
};

/// Aggregates game records into a tournament graph. With role_split set,
/// identities are (player, role) pairs, so one player yields one node per
/// role it appeared in. Records must be non-empty, game ids unique, and a
/// player may face itself only across different roles.
TournamentGraph build_graph(std::span<const GameRecord> records, const BuildOptions& opts = {});

/// Iterative routine exceeded its iteration cap. Carries the last iterate.
class NonConvergenceError : public std::runtime_error {
  public:
    NonConvergenceError(const std::string& what, double last_rating, int iterations)
        : std::runtime_error(what), last_rating(last_rating), iterations(iterations) {}

    double last_rating;
    int iterations;
};

}  // namespace scelo
