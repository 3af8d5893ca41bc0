#pragma once

#include "rollup/game_tree.hpp"
#include "rollup/params.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rollup {

// Counter-based generator: cheap to seed, so every simulated round gets its
// own stream keyed by (seed, round). That makes results a pure function of
// the round index, independent of how rounds are batched across workers.
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next();
    double next_unit();  // [0, 1) with 53 random bits
};

SplitMix64 round_stream(std::uint64_t seed, std::uint64_t round);

// Walk the tree once per round, drawing at every decision and chance node,
// and tally which leaf each round ends in. Counts for [first_round,
// first_round + n_rounds) merge exactly across any partition of the range.
std::vector<std::uint64_t> sample_leaf_counts(const GameTree& tree,
                                              const StrategyProfile& profile,
                                              std::uint64_t seed,
                                              std::uint64_t first_round,
                                              std::uint64_t n_rounds);

struct SimulationReport {
    std::string game;
    std::uint64_t rounds = 0;
    std::uint64_t seed = 0;
    std::string generator;
    std::vector<std::string> players;
    std::vector<double> mean;       // per player
    std::vector<double> std_error;  // per player
    std::vector<std::string> leaf_labels;
    std::vector<std::uint64_t> leaf_counts;
    double burned_total = 0.0;

    bool operator==(const SimulationReport&) const = default;
};

std::string report_to_json(const SimulationReport& report);
SimulationReport report_from_json(const std::string& text);

// Everything in the report is derived from the integer leaf counts, so two
// runs with the same (tree, profile, seed, rounds) are bit-identical.
// burn_per_leaf: stake destroyed when a round ends in that leaf.
SimulationReport simulate_tree(const GameTree& tree, const StrategyProfile& profile,
                               std::uint64_t rounds, std::uint64_t seed,
                               const std::vector<double>& burn_per_leaf,
                               const std::string& label);

// Game 2 at a mix point. Slashed validator stake is half-burned, so the
// burn ledger tracks s_A / 2 on the two leaves where A loses the stake.
SimulationReport simulate_game2(const ProtocolParams& params, const MixPoint& mix,
                                std::uint64_t rounds, std::uint64_t seed);

// Random-checking game: A honest with honest_prob, checker audits with
// params.p. Accepts the p = 0 and p = 1 edges. A slashed aggregator stake
// has no recipient here, so the whole s_A burns.
SimulationReport simulate_game3(const ProtocolParams& params, double honest_prob,
                                std::uint64_t rounds, std::uint64_t seed);

struct ConvergenceCheck {
    std::vector<bool> pass;        // per player
    std::vector<double> deviation; // |mean - analytic|
    bool exact_mismatch = false;   // zero spread but means disagree
    bool all_pass = false;
};

// Sampled means must sit within k_sigma standard errors of the analytic
// values. Requires at least 100 rounds for the error estimate to mean much.
ConvergenceCheck convergence_check(const SimulationReport& report,
                                   const std::vector<double>& analytic,
                                   double k_sigma = 4.0);

}  // namespace rollup
