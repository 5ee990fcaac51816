#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "scelo/batch_fit.hpp"
#include "scelo/io.hpp"
#include "scelo/probability.hpp"
#include "scelo/simulator.hpp"

using namespace scelo;

TEST_CASE("the default configuration yields 200 agents and 40000 games") {
    SimConfig cfg;
    auto agents = generate_population(cfg);
    CHECK(agents.size() == 200);
    auto records = play_schedule(agents, cfg);
    CHECK(records.size() == 40000);
}

TEST_CASE("generation is deterministic in the seed") {
    SimConfig cfg;
    cfg.eras = 3;
    cfg.agents_per_era = 6;
    cfg.games_per_pairing_block = 10;
    auto a1 = generate_population(cfg);
    auto a2 = generate_population(cfg);
    REQUIRE(a1.size() == a2.size());
    for (std::size_t n = 0; n < a1.size(); ++n) {
        CHECK(a1[n].red_cap == a2[n].red_cap);
        CHECK(a1[n].blue_cap == a2[n].blue_cap);
    }
    auto r1 = play_schedule(a1, cfg);
    auto r2 = play_schedule(a2, cfg);
    std::ostringstream s1, s2;
    write_game_records(s1, r1);
    write_game_records(s2, r2);
    CHECK(s1.str() == s2.str());

    cfg.seed = 2;
    auto r3 = play_schedule(generate_population(cfg), cfg);
    std::ostringstream s3;
    write_game_records(s3, r3);
    CHECK(s1.str() != s3.str());
}

TEST_CASE("zero spreads collapse an era onto one capability") {
    SimConfig cfg;
    cfg.eras = 2;
    cfg.agents_per_era = 5;
    cfg.base_spread = 0.0;
    cfg.role_spread = 0.0;
    auto agents = generate_population(cfg);
    for (const SimAgent& a : agents) {
        CHECK(a.red_cap == kDefaultMean + a.era * cfg.era_step);
        CHECK(a.blue_cap == a.red_cap);
        CHECK(a.true_combined == doctest::Approx(a.red_cap).epsilon(1e-12));
    }
}

TEST_CASE("the combined capability is the harmonic average of the roles") {
    SimConfig cfg;
    cfg.eras = 1;
    auto agents = generate_population(cfg);
    for (const SimAgent& a : agents) {
        CHECK(a.true_combined ==
              doctest::Approx(2.0 / (1.0 / a.red_cap + 1.0 / a.blue_cap)).epsilon(1e-12));
        CHECK(a.true_combined >= std::min(a.red_cap, a.blue_cap));
        CHECK(a.true_combined <= std::max(a.red_cap, a.blue_cap));
    }
}

TEST_CASE("every era after the first fields the newcomers plus the carryovers") {
    SimConfig cfg;
    cfg.eras = 4;
    cfg.agents_per_era = 8;
    cfg.carryover = 3;
    cfg.games_per_pairing_block = 20;
    auto agents = generate_population(cfg);
    auto records = play_schedule(agents, cfg);
    std::map<std::string, std::set<std::string>> per_era;
    for (const GameRecord& r : records) {
        per_era[r.scenario].insert(r.a.player);
        per_era[r.scenario].insert(r.b.player);
    }
    CHECK(per_era.at("era0").size() == 8);
    for (const char* era : {"era1", "era2", "era3"})
        CHECK(per_era.at(era).size() == 8 + 3);
}

TEST_CASE("matched agents split their games evenly") {
    SimConfig cfg;
    cfg.eras = 1;
    cfg.agents_per_era = 2;
    cfg.games_per_pairing_block = 400;
    cfg.base_spread = 0.0;
    cfg.role_spread = 0.0;
    auto agents = generate_population(cfg);
    auto records = play_schedule(agents, cfg);
    double wins = 0.0;
    for (const GameRecord& r : records) {
        const std::string& winner = r.outcome == Outcome::AWins ? r.a.player : r.b.player;
        if (winner == agents[0].id) wins += 1.0;
    }
    double f = wins / static_cast<double>(records.size());
    double bound = 3.0 * std::sqrt(0.25 / static_cast<double>(records.size()));
    CHECK(std::abs(f - 0.5) <= bound);
}

TEST_CASE("a 400-point edge wins about nine of eleven") {
    SimConfig cfg;
    cfg.eras = 1;
    cfg.agents_per_era = 2;
    cfg.games_per_pairing_block = 400;
    std::vector<SimAgent> agents{{"strong", 0, 1400.0, 1400.0, 1400.0},
                                 {"weak", 0, 1000.0, 1000.0, 1000.0}};
    auto records = play_schedule(agents, cfg);
    double wins = 0.0;
    for (const GameRecord& r : records) {
        const std::string& winner = r.outcome == Outcome::AWins ? r.a.player : r.b.player;
        if (winner == "strong") wins += 1.0;
    }
    double f = wins / static_cast<double>(records.size());
    double p = win_prob(1400.0, 1000.0);
    double bound = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(records.size()));
    CHECK(std::abs(f - p) <= bound + 1e-12);
}

TEST_CASE("fitting a reduced run recovers the capabilities") {
    SimConfig cfg;
    cfg.eras = 3;
    cfg.agents_per_era = 8;
    cfg.carryover = 3;
    cfg.games_per_pairing_block = 50;
    cfg.seed = 9;
    auto agents = generate_population(cfg);
    auto records = play_schedule(agents, cfg);
    FitEvaluation pml = evaluate_fit(records, agents, Fitter::PML);
    CHECK(pml.correlation > 0.95);
    CHECK(pml.rms_after_alignment < 100.0);
    FitEvaluation lls = evaluate_fit(records, agents, Fitter::LLS);
    CHECK(lls.correlation > 0.95);
}

TEST_CASE("era means rise with the configured capability step") {
    SimConfig cfg;  // defaults: 150-point steps dwarf the fitting noise
    auto agents = generate_population(cfg);
    auto records = play_schedule(agents, cfg);
    TournamentGraph graph = build_graph(records);
    for (const Identity& id : graph.players()) graph.set_prior(id, {1000.0, 1000.0});
    auto ratings = fit_pml(graph).ratings;

    std::vector<double> era_mean(cfg.eras, 0.0);
    std::vector<int> era_count(cfg.eras, 0);
    for (const SimAgent& a : agents) {
        auto it = ratings.find({a.id, ""});
        if (it == ratings.end()) continue;
        era_mean[a.era] += it->second;
        era_count[a.era] += 1;
    }
    int rising = 0;
    for (int e = 0; e + 1 < cfg.eras; ++e)
        if (era_mean[e + 1] / era_count[e + 1] >= era_mean[e] / era_count[e]) ++rising;
    CHECK(rising >= cfg.eras - 2);
}

TEST_CASE("invalid configurations are rejected") {
    SimConfig cfg;
    cfg.eras = 0;
    CHECK_THROWS_AS(generate_population(cfg), std::invalid_argument);
    SimConfig negative;
    negative.base_spread = -1.0;
    CHECK_THROWS_AS(generate_population(negative), std::invalid_argument);
    SimConfig lonely;
    lonely.eras = 1;
    lonely.agents_per_era = 1;
    auto one = generate_population(lonely);
    CHECK_THROWS_AS(play_schedule(one, lonely), std::invalid_argument);
}
