#pragma once

#include "rollup/game_tree.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace rollup {

// Expected payoff per player under a behavior profile. Throws CoverageError
// naming the first information set the profile does not cover, and
// ValidationError if any referenced distribution is not a probability
// vector of the right arity.
std::vector<double> expected_utilities(const GameTree& tree,
                                       const StrategyProfile& profile);

// Probability of reaching each node under the profile (root = 1).
std::vector<double> reach_probabilities(const GameTree& tree,
                                        const StrategyProfile& profile);

struct BackwardInductionResult {
    StrategyProfile profile;          // pure: one action per set gets mass 1
    std::vector<double> payoffs;      // at the root, one per player
    std::vector<std::string> tied_sets;  // sets where several actions tie
};

// Subgame-perfect equilibrium for perfect-information trees. Chance nodes
// are folded in by expectation. Ties break toward the first-listed action
// and the set label is recorded. Throws PerfectInformationError if any
// information set spans more than one node.
BackwardInductionResult backward_induction(const GameTree& tree);

// All pure strategies of one player: every way of fixing one action per
// information set. The last set varies fastest; element 0 picks the first
// action everywhere.
std::vector<BehaviorStrategy> enumerate_pure_strategies(const GameTree& tree,
                                                        const std::string& player);

struct BestResponse {
    BehaviorStrategy strategy;
    double value = 0.0;
    std::size_t num_optimal = 0;  // pure strategies within tie_tol of the best
};

// Exhaustive best response for `player` holding everyone else fixed.
BestResponse best_response(const GameTree& tree, const StrategyProfile& profile,
                           const std::string& player, double tie_tol = 1e-12);

struct RegretReport {
    std::string player;
    double current = 0.0;  // player's value under the profile as given
    double best = 0.0;     // value of the best response
    double regret = 0.0;   // best - current, clamped at zero
};

// One report per player, in tree.players order.
std::vector<RegretReport> regret_audit(const GameTree& tree,
                                       const StrategyProfile& profile);

}  // namespace rollup
