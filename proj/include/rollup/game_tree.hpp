#pragma once

#include "rollup/common.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rollup {

enum class NodeKind { Decision, Chance, Leaf };

// One node in a flat-array extensive-form tree. Children are indices into
// GameTree::nodes, which keeps the structure trivially serializable.
struct Node {
    NodeKind kind = NodeKind::Leaf;
    std::string owner;                  // decision nodes only
    std::vector<std::string> actions;   // decision and chance nodes
    std::vector<std::size_t> children;  // decision and chance nodes
    std::vector<double> probs;          // chance nodes only
    std::vector<double> payoffs;        // leaves only, one per player

    static Node decision(std::string owner, std::vector<std::string> actions,
                         std::vector<std::size_t> children);
    static Node chance(std::vector<std::string> actions, std::vector<double> probs,
                       std::vector<std::size_t> children);
    static Node leaf(std::vector<double> payoffs);

    bool operator==(const Node&) const = default;
};

// Nodes a player cannot tell apart. All member nodes must share an owner
// and offer identical action lists.
struct InfoSet {
    std::string owner;
    std::string label;
    std::vector<std::size_t> nodes;

    bool operator==(const InfoSet&) const = default;
};

struct GameTree {
    std::vector<std::string> players;
    std::vector<Node> nodes;  // nodes[0] is the root
    std::vector<InfoSet> info_sets;

    std::size_t player_index(const std::string& name) const;
    const InfoSet* find_set(const std::string& label) const;
    std::vector<std::size_t> leaves() const;

    // Path from the root to each leaf, actions joined with '/'.
    // Order matches leaves().
    std::vector<std::string> leaf_labels() const;

    std::vector<const InfoSet*> sets_of(const std::string& player) const;

    // Index into info_sets covering this node, if any.
    std::optional<std::size_t> node_set_index(std::size_t node) const;

    // Structural checks: index bounds, acyclicity, every node reached from
    // the root exactly once, chance probabilities normalized, payoff arity,
    // info set consistency, every decision node covered by exactly one set.
    // Throws ValidationError with a description of the first failure.
    void validate() const;

    bool operator==(const GameTree&) const = default;
};

// Probability over actions, one entry per information set label.
struct BehaviorStrategy {
    std::map<std::string, std::vector<double>> dist;

    bool operator==(const BehaviorStrategy&) const = default;
};

struct StrategyProfile {
    std::map<std::string, BehaviorStrategy> by_player;

    const std::vector<double>* find(const std::string& set_label) const;
    void set(const std::string& player, const std::string& set_label,
             std::vector<double> dist);

    bool operator==(const StrategyProfile&) const = default;
};

std::string tree_to_json(const GameTree& tree);
GameTree tree_from_json(const std::string& text);

}  // namespace rollup
