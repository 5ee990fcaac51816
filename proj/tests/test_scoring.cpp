#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "scelo/elo_update.hpp"
#include "scelo/probability.hpp"
#include "scelo/scoring.hpp"

using namespace scelo;

namespace {
const MarginPolicy kRms10{DeltaMode::RmsFraction, 0.1};
}

TEST_CASE("rematch probability from score margins") {
    CHECK(margin_prob(7.0, 7.0, kRms10) == doctest::Approx(0.5));
    CHECK(margin_prob(18.6, 13.7, kRms10) == doctest::Approx(0.909).epsilon(2e-3));
    CHECK(margin_prob(340.5, 335.2, kRms10) == doctest::Approx(0.506).epsilon(2e-3));
    CHECK(margin_prob(23.2, 22.1, kRms10) == doctest::Approx(0.553).epsilon(2e-3));
    CHECK(margin_prob(177.5, 140.7, kRms10) == doctest::Approx(0.863).epsilon(2e-3));

    CHECK_THROWS_AS(margin_prob(1.0, 2.0, kRms10), std::invalid_argument);  // loser first
    CHECK_THROWS_AS(margin_prob(0.0, 0.0, kRms10), std::invalid_argument);  // delta = 0

    // Monotone in the margin and never leaving [0.5, 1).
    MarginPolicy fixed{DeltaMode::Fixed, 2.0};
    double prev = 0.0;
    for (double gap = 0.0; gap <= 50.0; gap += 0.5) {
        double p = margin_prob(10.0 + gap, 10.0, fixed);
        CHECK(p >= 0.5);
        CHECK(p < 1.0);
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("margin-weighted actual score") {
    const ScoredGame x_games[] = {{13.7, 18.6}, {340.5, 335.2}, {23.2, 22.1}, {177.5, 140.7}};
    CHECK(weighted_actual_score(x_games, kRms10) == doctest::Approx(2.012).epsilon(5e-3));

    const ScoredGame ties[] = {{5.0, 5.0}, {9.0, 9.0}, {1.5, 1.5}, {2.0, 2.0}};
    CHECK(weighted_actual_score(ties, kRms10) == doctest::Approx(2.0));

    MarginPolicy fixed{DeltaMode::Fixed, 1.0};
    const ScoredGame routs[] = {{200.0, 0.0}, {150.0, 10.0}, {500.0, 100.0}};
    CHECK(weighted_actual_score(routs, fixed) == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("margin reward transform") {
    CHECK(margin_reward(0.5) == doctest::Approx(0.6));
    CHECK(margin_reward(1.0) == doctest::Approx(2.0 / 3.0));
    CHECK(margin_reward(1e9) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(margin_reward(-0.5), std::invalid_argument);
}

TEST_CASE("ECF game scores") {
    CHECK(ecf_game_score(120.0, 100.0, EcfOutcome::Win) == 150.0);
    CHECK(ecf_game_score(200.0, 100.0, EcfOutcome::Win) == 210.0);  // winner never punished
    CHECK(ecf_game_score(100.0, 200.0, EcfOutcome::Loss) == 90.0);  // loser never rewarded
    CHECK(ecf_game_score(120.0, 100.0, EcfOutcome::Draw) == 100.0);
}

TEST_CASE("ECF and Elo advantages convert both ways") {
    CHECK(ecf_to_elo(30.0) == doctest::Approx(240.8).epsilon(1e-3));
    CHECK(ecf_to_elo(0.0) == doctest::Approx(0.0));
    for (double b = -35.0; b <= 35.0; b += 2.5)
        CHECK(elo_to_ecf(ecf_to_elo(b)) == doctest::Approx(b).epsilon(1e-9));
    for (double b : {5.0, 17.5, 33.0})
        CHECK(ecf_to_elo(-b) == doctest::Approx(-ecf_to_elo(b)).epsilon(1e-12));
    CHECK_THROWS_AS(ecf_to_elo(45.0), std::invalid_argument);
    CHECK_THROWS_AS(elo_to_ecf(400.0), std::invalid_argument);
}

TEST_CASE("ECF expected-score fit") {
    std::vector<EcfEdge> pair{{{"A", ""}, {"B", ""}, 0.75}};
    EcfResult res = ecf_fit(pair, 100.0, 1e-6);
    CHECK(res.ratings.at({"A", ""}) - res.ratings.at({"B", ""}) ==
          doctest::Approx(25.0).epsilon(1e-6));
    CHECK(res.ratings.at({"A", ""}) + res.ratings.at({"B", ""}) ==
          doctest::Approx(200.0).epsilon(1e-9));

    std::vector<EcfEdge> symmetric{{{"A", ""}, {"B", ""}, 0.5},
                                   {{"B", ""}, {"C", ""}, 0.5},
                                   {{"A", ""}, {"C", ""}, 0.5}};
    EcfResult flat = ecf_fit(symmetric, 100.0, 1e-6);
    CHECK(flat.ratings.at({"A", ""}) == doctest::Approx(100.0).epsilon(1e-6));
    CHECK(flat.ratings.at({"C", ""}) == doctest::Approx(100.0).epsilon(1e-6));

    std::vector<EcfEdge> extreme{{{"A", ""}, {"B", ""}, 0.95}};
    EcfResult flagged = ecf_fit(extreme, 100.0, 1e-6);
    CHECK(flagged.out_of_range.size() == 1);
}

TEST_CASE("margin-weighted scores preserve the overshoot ordering") {
    const ScoredGame x_games[] = {{13.7, 18.6}, {340.5, 335.2}, {23.2, 22.1}, {177.5, 140.7}};
    double a4 = weighted_actual_score(x_games, kRms10);
    for (double n : {4.0, 40.0, 400.0, 4000.0}) {
        UpdateContext ctx;
        ctx.prior = RatingEstimate::from_k(1250.0, 50.0);
        ctx.opponents = {{1320.0, n}};
        ctx.actual_score = a4 * n / 4.0;
        double classic = classic_update(ctx).rating;
        double sc = sc_update(ctx, 0.01).rating;
        CHECK(classic >= sc);       // A > E here, so classic overshoots
        CHECK(sc >= ctx.prior.mu);  // and both move upward
    }
}
