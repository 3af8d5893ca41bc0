#include "rollup/games.hpp"
#include "rollup/common.hpp"

namespace rollup {

GameTree build_game1(const ProtocolParams& params) {
    params.validate();
    const double f = params.f, w = params.w;
    const double s_A = params.s_A, s_V = params.s_V, z = params.z;
    GameTree tree;
    tree.players = {"A", "V"};
    tree.nodes = {
        Node::decision("A", {"Honest", "Dishonest"}, {1, 2}),
        Node::decision("V", {"Challenge", "No"}, {3, 4}),
        Node::decision("V", {"Challenge", "No"}, {5, 6}),
        Node::leaf({f - w, -s_V}),
        Node::leaf({f - w, 0.0}),
        Node::leaf({-s_A - w, 0.5 * s_A}),
        Node::leaf({f + z - w, 0.0}),
    };
    tree.info_sets = {
        {"A", game1::kRoot, {0}},
        {"V", game1::kAfterHonest, {1}},
        {"V", game1::kAfterDishonest, {2}},
    };
    tree.validate();
    return tree;
}

GameTree build_game2(const ProtocolParams& params) {
    params.validate();
    const double s_A = params.s_A, s_V = params.s_V, x = params.x, z = params.z;
    GameTree tree;
    tree.players = {"A", "V"};
    tree.nodes = {
        Node::decision("V", {"NoSearch", "Search"}, {1, 2}),
        Node::decision("A", {"Honest", "Dishonest"}, {3, 4}),
        Node::decision("A", {"Honest", "Dishonest"}, {5, 6}),
        Node::decision("V", {"Challenge", "No"}, {7, 8}),
        Node::decision("V", {"Challenge", "No"}, {9, 10}),
        Node::decision("V", {"Challenge", "No"}, {11, 12}),
        Node::decision("V", {"Challenge", "No"}, {13, 14}),
        Node::leaf({0.0, -s_V}),
        Node::leaf({0.0, 0.0}),
        Node::leaf({-s_A, 0.5 * s_A}),
        Node::leaf({z, 0.0}),
        Node::leaf({0.0, -s_V - x}),
        Node::leaf({0.0, -x}),
        Node::leaf({-s_A, 0.5 * s_A - x}),
        Node::leaf({z, -x}),
    };
    tree.info_sets = {
        {"V", game2::kSearch, {0}},
        {"A", game2::kCommit, {1, 2}},
        {"V", game2::kBlind, {3, 4}},
        {"V", game2::kSeenHonest, {5}},
        {"V", game2::kSeenDishonest, {6}},
    };
    tree.validate();
    return tree;
}

GameTree build_game2_easter(const ProtocolParams& params) {
    GameTree tree = build_game2(params);
    if (params.y == 0.0) return tree;
    // Leaves 11..14 sit below the Search move; the bonus lands on V there
    // whatever A committed and whether V challenged.
    for (std::size_t leaf : {11, 12, 13, 14})
        tree.nodes[leaf].payoffs[1] += params.y;
    return tree;
}

GameTree build_game3(const ProtocolParams& params) {
    params.validate();
    if (!params.p)
        throw ValidationError("the random-check game needs p");
    const double p = *params.p;
    if (!(p > 0.0) || !(p < 1.0))
        throw ValidationError("the random-check game needs 0 < p < 1, got p = " +
                              full_precision(p));
    const double s_A = params.s_A, z = params.z;
    GameTree tree;
    tree.players = {"A", "C"};
    tree.nodes = {
        Node::decision("A", {"Honest", "Dishonest"}, {1, 2}),
        Node::chance({"Check", "No"}, {p, 1.0 - p}, {3, 4}),
        Node::chance({"Check", "No"}, {p, 1.0 - p}, {5, 6}),
        Node::leaf({0.0, 0.0}),
        Node::leaf({0.0, 0.0}),
        Node::leaf({-s_A, 0.0}),
        Node::leaf({z, 0.0}),
    };
    tree.info_sets = {
        {"A", game3::kCommit, {0}},
    };
    tree.validate();
    return tree;
}

StrategyProfile game2_profile(const MixPoint& mix) {
    mix.validate();
    StrategyProfile profile;
    profile.set("V", game2::kSearch, {mix.b, 1.0 - mix.b});
    profile.set("V", game2::kBlind, {mix.g, 1.0 - mix.g});
    profile.set("V", game2::kSeenHonest, {0.0, 1.0});
    profile.set("V", game2::kSeenDishonest, {1.0, 0.0});
    profile.set("A", game2::kCommit, {mix.h, 1.0 - mix.h});
    return profile;
}

StrategyProfile game3_profile(double honest_prob) {
    if (!(honest_prob >= 0.0) || !(honest_prob <= 1.0))
        throw ValidationError("honest_prob must lie in [0,1]");
    StrategyProfile profile;
    profile.set("A", game3::kCommit, {honest_prob, 1.0 - honest_prob});
    return profile;
}

double aggregator_utility(const ProtocolParams& params, const MixPoint& mix) {
    params.validate();
    mix.validate();
    return aggregator_utility_formula(params.s_A, params.z, mix.b, mix.g, mix.h);
}

double validator_utility(const ProtocolParams& params, const MixPoint& mix) {
    params.validate();
    mix.validate();
    return validator_utility_formula(params.s_A, params.s_V, params.x, mix.b,
                                     mix.g, mix.h);
}

double transactor_utility(const ProtocolParams& params, const MixPoint& mix) {
    params.validate();
    mix.validate();
    if (!params.u_T)
        throw ValidationError("transactor utility needs u_T");
    return transactor_utility_formula(params.f, *params.u_T, mix.b, mix.g, mix.h);
}

}  // namespace rollup
