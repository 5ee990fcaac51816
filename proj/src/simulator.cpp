#include "scelo/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "scelo/probability.hpp"
#include "scelo/stats.hpp"

namespace scelo {

namespace {

// Independent sub-streams are derived from the seed with splitmix64 so
// population and schedule draws never interleave.
std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Top 53 bits; uniform in [0, 1). std::uniform_real_distribution is
// implementation-defined, so draws go through this instead.
double next_unit(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

double perturb(std::mt19937_64& eng, double spread, bool normal) {
    if (spread == 0.0) {
        next_unit(eng);  // keep the draw count independent of the spread
        return 0.0;
    }
    if (!normal) return (2.0 * next_unit(eng) - 1.0) * spread;
    double u1 = std::max(next_unit(eng), 1e-300);
    double u2 = next_unit(eng);
    return spread * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void check_config(const SimConfig& cfg) {
    if (cfg.eras < 1 || cfg.agents_per_era < 1 || cfg.carryover < 1 ||
        cfg.games_per_pairing_block < 1)
        throw std::invalid_argument("all simulator counts must be >= 1");
    if (cfg.base_spread < 0.0 || cfg.role_spread < 0.0)
        throw std::invalid_argument("spreads must be >= 0");
}

std::string agent_id(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "a%04d", index);
    return buf;
}

}  // namespace

std::vector<SimAgent> generate_population(const SimConfig& cfg) {
    check_config(cfg);
    std::uint64_t state = cfg.seed;
    std::mt19937_64 eng(splitmix64(state));
    std::vector<SimAgent> agents;
    agents.reserve(static_cast<std::size_t>(cfg.eras) * cfg.agents_per_era);
    int index = 0;
    for (int era = 0; era < cfg.eras; ++era) {
        double era_mean = kDefaultMean + era * cfg.era_step;
        for (int n = 0; n < cfg.agents_per_era; ++n, ++index) {
            double base = era_mean + perturb(eng, cfg.base_spread, cfg.normal_perturbation);
            double red = base + perturb(eng, cfg.role_spread, cfg.normal_perturbation);
            double blue = base + perturb(eng, cfg.role_spread, cfg.normal_perturbation);
            double combined = 2.0 / (1.0 / red + 1.0 / blue);
            agents.push_back({agent_id(index), era, red, blue, combined});
        }
    }
    return agents;
}

std::vector<GameRecord> play_schedule(std::span<const SimAgent> agents, const SimConfig& cfg) {
    check_config(cfg);
    std::uint64_t state = cfg.seed;
    splitmix64(state);  // population stream
    std::mt19937_64 eng(splitmix64(state));

    std::map<int, std::vector<const SimAgent*>> by_era;
    for (const SimAgent& a : agents) by_era[a.era].push_back(&a);

    std::vector<GameRecord> records;
    std::vector<const SimAgent*> carryovers;
    long long game_seq = 0;
    for (auto& [era, fresh] : by_era) {
        const std::vector<const SimAgent*>& pool = carryovers.empty() ? fresh : carryovers;
        if (pool.size() < 2 && carryovers.empty())
            throw std::invalid_argument("an era needs at least two agents to schedule games");
        std::map<std::string, std::pair<double, double>> tally;  // wins, games
        for (const SimAgent* agent : fresh) {
            for (int g = 0; g < 2 * cfg.games_per_pairing_block; ++g) {
                const SimAgent* opp = pool[g % pool.size()];
                if (opp->id == agent->id) opp = pool[(g + 1) % pool.size()];
                bool agent_is_red;
                if (cfg.coin_flip_roles) agent_is_red = next_unit(eng) < 0.5;
                else agent_is_red = g % 2 == 0;
                const SimAgent* red = agent_is_red ? agent : opp;
                const SimAgent* blue = agent_is_red ? opp : agent;
                bool red_wins = next_unit(eng) < win_prob(red->red_cap, blue->blue_cap);
                char buf[24];
                std::snprintf(buf, sizeof(buf), "g%06lld", game_seq++);
                GameRecord rec;
                rec.game_id = buf;
                rec.a = {red->id, "Red"};
                rec.b = {blue->id, "Blue"};
                rec.scenario = "era" + std::to_string(era);
                rec.outcome = red_wins ? Outcome::AWins : Outcome::BWins;
                records.push_back(std::move(rec));
                tally[red->id].second += 1.0;
                tally[blue->id].second += 1.0;
                tally[red_wins ? red->id : blue->id].first += 1.0;
            }
        }
        // Next era's carryovers: highest win percentage this era, ties by id.
        std::vector<std::pair<std::string, double>> ranked;
        for (const auto& [id, wt] : tally) ranked.push_back({id, wt.first / wt.second});
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        std::map<std::string, const SimAgent*> by_id;
        for (const SimAgent& a : agents) by_id[a.id] = &a;
        carryovers.clear();
        for (std::size_t n = 0; n < ranked.size() && n < static_cast<std::size_t>(cfg.carryover);
             ++n)
            carryovers.push_back(by_id.at(ranked[n].first));
    }
    return records;
}

FitEvaluation evaluate_fit(std::span<const GameRecord> records, std::span<const SimAgent> agents,
                           Fitter fitter) {
    TournamentGraph graph = build_graph(records);
    for (const Identity& id : graph.players())
        graph.set_prior(id, {kDefaultMean, 1000.0});

    std::map<Identity, double> fitted;
    if (fitter == Fitter::PML) {
        fitted = fit_pml(graph).ratings;
    } else {
        auto edges = build_advantage_graph(graph, 0.1, MomentMethod::Approx);
        fitted = fit_lls(edges).ratings;
    }

    std::vector<double> truth, estimate;
    for (const SimAgent& a : agents) {
        auto it = fitted.find({a.id, ""});
        if (it == fitted.end()) continue;  // agent never played
        truth.push_back(a.true_combined);
        estimate.push_back(it->second);
    }
    return {pearson_correlation(estimate, truth), rms_after_alignment(estimate, truth)};
}

}  // namespace scelo
