#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "scelo/asymmetric.hpp"
#include "scelo/probability.hpp"

using namespace scelo;

namespace {

GameRecord rec(int n, const std::string& pa, const std::string& ra, const std::string& pb,
               const std::string& rb, Outcome o) {
    GameRecord r;
    r.game_id = "g" + std::to_string(n);
    r.a = {pa, ra};
    r.b = {pb, rb};
    r.outcome = o;
    return r;
}

// Round-robin across roles: every (agent-as-Pink, other-agent-as-Green) cell
// plays `games` games with the Pink side winning `pink_wins` of them.
std::vector<GameRecord> cross_role_tournament(const std::vector<std::string>& agents, int games,
                                              int pink_wins) {
    std::vector<GameRecord> records;
    int n = 0;
    for (const std::string& p : agents)
        for (const std::string& g : agents) {
            if (p == g) continue;
            for (int i = 0; i < games; ++i)
                records.push_back(
                    rec(n++, p, "Pink", g, "Green", i < pink_wins ? Outcome::AWins : Outcome::BWins));
        }
    return records;
}

}  // namespace

TEST_CASE("role-symmetric results produce no side advantage") {
    auto records = cross_role_tournament({"A", "B", "C"}, 10, 5);
    TournamentGraph g = build_graph(records, {.role_split = true});
    RoleFitConfig cfg;
    cfg.lls.tol = 1e-5;
    RoleRatings rr = fit_role_ratings(g, cfg);
    AnovaResult an = anova(rr);
    CHECK(std::abs(an.rho) < 1e-6);
    double sum = 0.0;
    for (const auto& [who, r] : rr.rp) sum += r;
    for (const auto& [who, r] : rr.rg) sum += r;
    CHECK(std::abs(sum) < 1e-6);  // centering
}

TEST_CASE("self-play exposes the gap between a player's two roles") {
    std::vector<GameRecord> records;
    for (int n = 0; n < 400; ++n)
        records.push_back(
            rec(n, "A", "Pink", "A", "Green", n < 300 ? Outcome::AWins : Outcome::BWins));
    TournamentGraph g = build_graph(records, {.role_split = true});
    RoleFitConfig cfg;
    cfg.prior_weight = 0.01;  // near-frequency advantage for the single edge
    cfg.lls.tol = 1e-5;
    RoleRatings rr = fit_role_ratings(g, cfg);
    double as_pink = rr.role_p == "Pink" ? rr.rp.at("A") : rr.rg.at("A");
    double as_green = rr.role_p == "Pink" ? rr.rg.at("A") : rr.rp.at("A");
    CHECK(as_pink - as_green == doctest::Approx(190.85).epsilon(3e-3));
}

TEST_CASE("the cube schedule fits eight interdependent ratings") {
    // Four agents; every agent-as-Pink plays every other agent-as-Green,
    // with capability gaps injected through lopsided win counts.
    std::vector<GameRecord> records;
    int n = 0;
    const std::string agents[] = {"A", "B", "C", "D"};
    std::mt19937_64 eng(71);
    for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) {
            if (p == q) continue;
            int pink_wins = 4 + static_cast<int>(eng() % 13);  // 4..16 of 20
            for (int i = 0; i < 20; ++i)
                records.push_back(rec(n++, agents[p], "Pink", agents[q], "Green",
                                      i < pink_wins ? Outcome::AWins : Outcome::BWins));
        }
    TournamentGraph g = build_graph(records, {.role_split = true});
    RoleFitConfig cfg;
    cfg.lls.tol = 1e-4;
    RoleRatings rr = fit_role_ratings(g, cfg);
    REQUIRE(rr.rp.size() == 4);
    REQUIRE(rr.rg.size() == 4);

    // Stationarity of the underlying least-squares system on all 12 edges.
    auto edges = build_advantage_graph(g, cfg.prior_weight);
    REQUIRE(edges.size() == 12);
    std::map<Identity, double> fitted;
    for (const auto& [player, r] : rr.rp) fitted[{player, rr.role_p}] = r;
    for (const auto& [player, r] : rr.rg) fitted[{player, rr.role_g}] = r;
    std::map<Identity, std::pair<double, int>> neighbour;
    for (const AdvantageEdge& e : edges) {
        neighbour[e.i].first += fitted.at(e.j) + e.a_ij;
        neighbour[e.i].second += 1;
        neighbour[e.j].first += fitted.at(e.i) - e.a_ij;
        neighbour[e.j].second += 1;
    }
    for (const auto& [who, acc] : neighbour)
        CHECK(std::abs(fitted.at(who) - acc.first / acc.second) < 0.01);
}

TEST_CASE("within-role contests are rejected") {
    auto records = cross_role_tournament({"A", "B"}, 4, 2);
    records.push_back(rec(999, "A", "Pink", "B", "Pink", Outcome::AWins));
    TournamentGraph g = build_graph(records, {.role_split = true});
    CHECK_THROWS_AS(fit_role_ratings(g, {}), std::invalid_argument);
}

TEST_CASE("anova decomposition identities") {
    RoleRatings rr;
    rr.role_p = "Pink";
    rr.role_g = "Green";
    // Every Pink rating exactly 100 above the Green counterpart.
    rr.rp = {{"A", 150.0}, {"B", 50.0}, {"C", -200.0 + 100.0}};
    rr.rg = {{"A", 50.0}, {"B", -50.0}, {"C", -200.0}};
    double sum = 0.0;
    for (auto& [w, r] : rr.rp) sum += r;
    for (auto& [w, r] : rr.rg) sum += r;
    for (auto& [w, r] : rr.rp) r -= sum / 6.0;
    for (auto& [w, r] : rr.rg) r -= sum / 6.0;

    AnovaResult an = anova(rr);
    CHECK(an.rho == doctest::Approx(50.0).epsilon(1e-12));
    for (const auto& [who, res] : an.residual) CHECK(std::abs(res) < 1e-9);

    // Reconstruction: RP_i = R_i + rho + rho_i and RG_i = R_i - rho - rho_i.
    for (const auto& [who, overall] : an.overall) {
        CHECK(rr.rp.at(who) ==
              doctest::Approx(overall + an.rho + an.residual.at(who)).epsilon(1e-12));
        CHECK(rr.rg.at(who) ==
              doctest::Approx(overall - an.rho - an.residual.at(who)).epsilon(1e-12));
    }

    // Difference-of-averages equals average-of-differences over two.
    double diff_avg = 0.0;
    for (const auto& [who, rp] : rr.rp) diff_avg += rp - rr.rg.at(who);
    diff_avg /= 2.0 * static_cast<double>(rr.rp.size());
    CHECK(an.rho == doctest::Approx(diff_avg).epsilon(1e-12));
}

TEST_CASE("an individual deviation shows up as the idiosyncratic residual") {
    RoleRatings rr;
    rr.role_p = "Pink";
    rr.role_g = "Green";
    // Role means give rho = 50; agent B sits 300 apart, so rho_B = 100.
    rr.rp = {{"A", -50.0}, {"B", 150.0}};
    rr.rg = {{"A", 50.0}, {"B", -150.0}};
    AnovaResult an = anova(rr);
    CHECK(an.rho == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(an.residual.at("B") == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(an.residual.at("A") == doctest::Approx(-100.0).epsilon(1e-12));
    double mean_residual = 0.0;
    for (const auto& [who, r] : an.residual) mean_residual += r;
    CHECK(std::abs(mean_residual) < 1e-9);
}

TEST_CASE("swapping the role labels negates the side terms only") {
    RoleRatings rr;
    rr.role_p = "Green";
    rr.role_g = "Pink";
    rr.rp = {{"A", 80.0}, {"B", -20.0}};
    rr.rg = {{"A", 10.0}, {"B", -70.0}};
    AnovaResult an = anova(rr);

    RoleRatings swapped;
    swapped.role_p = rr.role_g;
    swapped.role_g = rr.role_p;
    swapped.rp = rr.rg;
    swapped.rg = rr.rp;
    AnovaResult an2 = anova(swapped);
    CHECK(an2.rho == doctest::Approx(-an.rho).epsilon(1e-12));
    for (const auto& [who, overall] : an.overall) {
        CHECK(an2.overall.at(who) == doctest::Approx(overall).epsilon(1e-12));
        CHECK(an2.residual.at(who) == doctest::Approx(-an.residual.at(who)).epsilon(1e-12));
    }
}

TEST_CASE("unbalanced schedules fit with a diagnostic") {
    auto records = cross_role_tournament({"A", "B"}, 6, 3);
    records.push_back(rec(500, "A", "Pink", "B", "Green", Outcome::AWins));  // extra Pink game
    TournamentGraph g = build_graph(records, {.role_split = true});
    RoleRatings rr = fit_role_ratings(g, {});
    CHECK_FALSE(rr.diagnostics.empty());
}

TEST_CASE("games-weighted side advantage differs only when cells are uneven") {
    RoleRatings rr;
    rr.role_p = "Pink";
    rr.role_g = "Green";
    rr.rp = {{"A", 100.0}, {"B", 0.0}};
    rr.rg = {{"A", -60.0}, {"B", -40.0}};
    std::map<std::string, double> even{{"A", 10.0}, {"B", 10.0}};
    CHECK(anova_weighted(rr, even, even).rho == doctest::Approx(anova(rr).rho).epsilon(1e-12));
    std::map<std::string, double> skew{{"A", 30.0}, {"B", 10.0}};
    CHECK(anova_weighted(rr, skew, even).rho != doctest::Approx(anova(rr).rho).epsilon(1e-12));
}
