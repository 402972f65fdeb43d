#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prilsim/engine.hpp"

namespace prilsim {

// Small single-packet scenario whose loss patterns can be enumerated
// exhaustively: `horizon` reserved occurrences, one packet queued before the
// first of them, sleep value horizon - 1.
struct OracleScenario {
    Strategy strategy;
    double eps_f = 0.126;
    double eps_a = 0.080;
    int n_tries = 2;
    int horizon = 4;  // <= 8

    void validate() const;
};

// The equivalent engine configuration (fixed geometry and phase).
RunConfig oracle_run_config(const OracleScenario& scenario, std::uint64_t seed);

// Expected value and variance of one counter under the scenario.
struct OracleCounterStat {
    std::string name;
    double mean = 0.0;
    double variance = 0.0;
};

// Probability-weighted enumeration of every loss pattern, implemented
// directly from the protocol rules (it does not call the engine).
std::vector<OracleCounterStat> enumerate_expectation(const OracleScenario& scenario);

struct OracleCounterComparison {
    std::string name;
    double expected = 0.0;
    double simulated = 0.0;
    double sigma = 0.0;  // std error of the Monte Carlo mean
    double z = 0.0;
    bool pass = false;
};

struct OracleComparison {
    OracleScenario scenario;
    std::uint64_t trials = 0;
    std::vector<OracleCounterComparison> counters;
    bool pass = false;
};

// Monte Carlo over `trials` seeded engine runs against the enumeration;
// each counter must land within 3 sigma (exact when the variance is zero).
OracleComparison oracle_compare(const OracleScenario& scenario, std::uint64_t trials,
                                std::uint64_t base_seed);

std::string format_oracle_report(const OracleComparison& comparison);

}  // namespace prilsim
