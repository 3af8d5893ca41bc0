#pragma once

#include "rollup/game_tree.hpp"
#include "rollup/params.hpp"

namespace rollup {

// Information set labels, fixed so strategies and tests can address them.
namespace game1 {
inline constexpr const char* kRoot = "A/root";
inline constexpr const char* kAfterHonest = "V/after-honest";
inline constexpr const char* kAfterDishonest = "V/after-dishonest";
}  // namespace game1

namespace game2 {
inline constexpr const char* kSearch = "V/search";
inline constexpr const char* kCommit = "A/commit";
inline constexpr const char* kBlind = "V/blind";
inline constexpr const char* kSeenHonest = "V/seen-honest";
inline constexpr const char* kSeenDishonest = "V/seen-dishonest";
}  // namespace game2

namespace game3 {
inline constexpr const char* kCommit = "A/commit";
}  // namespace game3

// Perfect-information baseline: the aggregator commits in the open, the
// validator reacts. Players A, V.
GameTree build_game1(const ProtocolParams& params);

// The simultaneous search variant. The validator first chooses whether to
// watch the commitment; an unwatched commitment leaves her guessing at an
// information set spanning both histories. Players A, V.
GameTree build_game2(const ProtocolParams& params);

// Game 2 with a whistleblower bonus of y paid on top of every payoff the
// validator earns after choosing Search. y = 0 returns build_game2 exactly.
GameTree build_game2_easter(const ProtocolParams& params);

// Aggregator versus an exogenous checker that audits with probability p.
// Requires params.p present and strictly inside (0, 1). Players A, C.
GameTree build_game3(const ProtocolParams& params);

// Behavior profile for Game 2 at a mix point: V plays NoSearch with b and
// Challenge with g when blind, A is Honest with h, and an informed V
// challenges exactly the dishonest commitment.
StrategyProfile game2_profile(const MixPoint& mix);

// Honest with probability honest_prob at the single Game 3 decision.
StrategyProfile game3_profile(double honest_prob);

// Closed-form expected utilities at a mix point, templated so the same
// expressions run in doubles and in exact rationals.
template <typename T>
T aggregator_utility_formula(T s_A, T z, T b, T g, T h) {
    T one = T(1);
    return (one - h) * (b * (g * (-s_A) + (one - g) * z) + (one - b) * (-s_A));
}

template <typename T>
T validator_utility_formula(T s_A, T s_V, T x, T b, T g, T h) {
    T one = T(1);
    T half = T(1) / T(2);
    return b * g * (h * (-s_V) + (one - h) * half * s_A) +
           (one - b) * ((one - h) * half * s_A - x);
}

template <typename T>
T transactor_utility_formula(T f, T u_T, T b, T g, T h) {
    T one = T(1);
    return h * (u_T - f) - b * (one - h) * (one - g) * f;
}

double aggregator_utility(const ProtocolParams& params, const MixPoint& mix);
double validator_utility(const ProtocolParams& params, const MixPoint& mix);

// Requires params.u_T.
double transactor_utility(const ProtocolParams& params, const MixPoint& mix);

}  // namespace rollup
