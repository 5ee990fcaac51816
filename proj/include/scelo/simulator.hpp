#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scelo/asymmetric.hpp"
#include "scelo/types.hpp"

namespace scelo {

/// Era-structured synthetic tournament. Each era introduces
/// agents_per_era fresh agents whose mean capability sits era_step above
/// the previous era's; each agent gets separate Red and Blue capabilities.
/// New agents play games_per_pairing_block games as Red and the same
/// number as Blue against the carryover pool (the previous era's top
/// performers by win percentage; the other new agents in the first era).
struct SimConfig {
    int eras = 10;
    int agents_per_era = 20;
    int carryover = 5;
    int games_per_pairing_block = 100;
    double era_step = 150.0;
    double base_spread = 200.0;  // plus-or-minus on the era mean
    double role_spread = 200.0;  // plus-or-minus per role
    std::uint64_t seed = 1;
    bool normal_perturbation = false;  // spread becomes a standard deviation
    bool coin_flip_roles = false;      // otherwise Red/Blue alternate per game
};

struct SimAgent {
    std::string id;
    int era;
    double red_cap;
    double blue_cap;
    double true_combined;  // harmonic average of the two capabilities
};

/// Deterministic given (config, seed): a fixed draw order per agent
/// (base, red offset, blue offset) from an mt19937-64 stream.
std::vector<SimAgent> generate_population(const SimConfig& cfg);

/// Deterministic game stream; outcomes drawn from win_prob of the two
/// role capabilities. Ties in the carryover ranking break by agent id.
std::vector<GameRecord> play_schedule(std::span<const SimAgent> agents, const SimConfig& cfg);

struct FitEvaluation {
    double correlation;          // Pearson, fitted vs harmonic-combined truth
    double rms_after_alignment;  // Elo points, means aligned
};

/// Fits the records with uninformative priors (mu 1000, sigma 1000) and
/// scores the result against the agents' combined capabilities.
FitEvaluation evaluate_fit(std::span<const GameRecord> records, std::span<const SimAgent> agents,
                           Fitter fitter);

}  // namespace scelo
