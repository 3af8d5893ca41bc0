#include "rollup/engine.hpp"
#include "rollup/common.hpp"

#include <algorithm>
#include <cmath>

namespace rollup {

namespace {

const std::vector<double>& resolve_dist(const GameTree& tree,
                                        const StrategyProfile& profile,
                                        std::size_t node_idx) {
    const Node& node = tree.nodes[node_idx];
    auto set_idx = tree.node_set_index(node_idx);
    if (!set_idx)
        throw ValidationError("decision node " + std::to_string(node_idx) +
                              " belongs to no information set");
    const InfoSet& set = tree.info_sets[*set_idx];
    auto player_it = profile.by_player.find(set.owner);
    const std::vector<double>* dist = nullptr;
    if (player_it != profile.by_player.end()) {
        auto it = player_it->second.dist.find(set.label);
        if (it != player_it->second.dist.end()) dist = &it->second;
    }
    if (!dist)
        throw CoverageError("profile has no distribution for information set '" +
                            set.label + "' of player '" + set.owner + "'");
    if (dist->size() != node.actions.size())
        throw ValidationError("distribution for '" + set.label + "' has " +
                              std::to_string(dist->size()) + " entries for " +
                              std::to_string(node.actions.size()) + " actions");
    double sum = 0.0;
    for (double p : *dist) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw ValidationError("distribution for '" + set.label +
                                  "' has a negative or non-finite entry");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw ValidationError("distribution for '" + set.label + "' sums to " +
                              full_precision(sum));
    return *dist;
}

void accumulate(const GameTree& tree, const StrategyProfile& profile,
                std::size_t node_idx, double weight, std::vector<double>& out,
                std::vector<double>* reach) {
    if (reach) (*reach)[node_idx] = weight;
    const Node& node = tree.nodes[node_idx];
    switch (node.kind) {
        case NodeKind::Leaf:
            for (std::size_t k = 0; k < out.size(); ++k)
                out[k] += weight * node.payoffs[k];
            return;
        case NodeKind::Chance:
            for (std::size_t a = 0; a < node.children.size(); ++a)
                accumulate(tree, profile, node.children[a], weight * node.probs[a],
                           out, reach);
            return;
        case NodeKind::Decision: {
            const auto& dist = resolve_dist(tree, profile, node_idx);
            for (std::size_t a = 0; a < node.children.size(); ++a)
                accumulate(tree, profile, node.children[a], weight * dist[a], out,
                           reach);
            return;
        }
    }
}

}  // namespace

std::vector<double> expected_utilities(const GameTree& tree,
                                       const StrategyProfile& profile) {
    std::vector<double> out(tree.players.size(), 0.0);
    accumulate(tree, profile, 0, 1.0, out, nullptr);
    return out;
}

std::vector<double> reach_probabilities(const GameTree& tree,
                                        const StrategyProfile& profile) {
    std::vector<double> out(tree.players.size(), 0.0);
    std::vector<double> reach(tree.nodes.size(), 0.0);
    accumulate(tree, profile, 0, 1.0, out, &reach);
    return reach;
}

namespace {

std::vector<double> induce(const GameTree& tree, std::size_t node_idx,
                           BackwardInductionResult& result) {
    const Node& node = tree.nodes[node_idx];
    switch (node.kind) {
        case NodeKind::Leaf:
            return node.payoffs;
        case NodeKind::Chance: {
            std::vector<double> values(tree.players.size(), 0.0);
            for (std::size_t a = 0; a < node.children.size(); ++a) {
                auto child = induce(tree, node.children[a], result);
                for (std::size_t k = 0; k < values.size(); ++k)
                    values[k] += node.probs[a] * child[k];
            }
            return values;
        }
        case NodeKind::Decision: {
            auto set_idx = tree.node_set_index(node_idx);
            if (!set_idx)
                throw ValidationError("decision node " + std::to_string(node_idx) +
                                      " belongs to no information set");
            const InfoSet& set = tree.info_sets[*set_idx];
            if (set.nodes.size() != 1)
                throw PerfectInformationError(
                    "information set '" + set.label + "' spans " +
                    std::to_string(set.nodes.size()) +
                    " nodes; backward induction needs perfect information");
            std::size_t owner = tree.player_index(node.owner);
            std::vector<std::vector<double>> child_values;
            child_values.reserve(node.children.size());
            for (std::size_t c : node.children)
                child_values.push_back(induce(tree, c, result));
            std::size_t best = 0;
            bool tied = false;
            for (std::size_t a = 1; a < child_values.size(); ++a) {
                if (child_values[a][owner] > child_values[best][owner]) {
                    best = a;
                    tied = false;
                } else if (child_values[a][owner] == child_values[best][owner]) {
                    tied = true;
                }
            }
            if (tied) result.tied_sets.push_back(set.label);
            std::vector<double> dist(node.actions.size(), 0.0);
            dist[best] = 1.0;
            result.profile.set(node.owner, set.label, std::move(dist));
            return child_values[best];
        }
    }
    throw ValidationError("corrupt node kind");
}

}  // namespace

BackwardInductionResult backward_induction(const GameTree& tree) {
    BackwardInductionResult result;
    result.payoffs = induce(tree, 0, result);
    return result;
}

std::vector<BehaviorStrategy> enumerate_pure_strategies(const GameTree& tree,
                                                        const std::string& player) {
    tree.player_index(player);
    auto sets = tree.sets_of(player);
    std::size_t total = 1;
    for (const InfoSet* s : sets) {
        std::size_t arity = tree.nodes[s->nodes.front()].actions.size();
        if (total > 1'000'000 / std::max<std::size_t>(arity, 1))
            throw ValidationError("too many pure strategies to enumerate");
        total *= arity;
    }
    std::vector<BehaviorStrategy> out;
    out.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        BehaviorStrategy strat;
        std::size_t rem = idx;
        for (std::size_t s = sets.size(); s-- > 0;) {
            std::size_t arity = tree.nodes[sets[s]->nodes.front()].actions.size();
            std::size_t choice = rem % arity;
            rem /= arity;
            std::vector<double> dist(arity, 0.0);
            dist[choice] = 1.0;
            strat.dist[sets[s]->label] = std::move(dist);
        }
        out.push_back(std::move(strat));
    }
    return out;
}

BestResponse best_response(const GameTree& tree, const StrategyProfile& profile,
                           const std::string& player, double tie_tol) {
    std::size_t k = tree.player_index(player);
    auto candidates = enumerate_pure_strategies(tree, player);
    BestResponse best;
    std::vector<double> values;
    values.reserve(candidates.size());
    StrategyProfile scratch = profile;
    for (const auto& candidate : candidates) {
        scratch.by_player[player] = candidate;
        values.push_back(expected_utilities(tree, scratch)[k]);
    }
    std::size_t arg = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[arg]) arg = i;
    best.strategy = candidates[arg];
    best.value = values[arg];
    for (double v : values)
        if (values[arg] - v <= tie_tol) best.num_optimal += 1;
    return best;
}

std::vector<RegretReport> regret_audit(const GameTree& tree,
                                       const StrategyProfile& profile) {
    std::vector<double> current = expected_utilities(tree, profile);
    std::vector<RegretReport> out;
    for (std::size_t k = 0; k < tree.players.size(); ++k) {
        RegretReport r;
        r.player = tree.players[k];
        r.current = current[k];
        r.best = best_response(tree, profile, tree.players[k]).value;
        r.regret = std::max(0.0, r.best - r.current);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace rollup
