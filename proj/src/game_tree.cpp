#include "rollup/game_tree.hpp"
#include "rollup/common.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

namespace rollup {

Node Node::decision(std::string owner, std::vector<std::string> actions,
                    std::vector<std::size_t> children) {
    Node n;
    n.kind = NodeKind::Decision;
    n.owner = std::move(owner);
    n.actions = std::move(actions);
    n.children = std::move(children);
    return n;
}

Node Node::chance(std::vector<std::string> actions, std::vector<double> probs,
                  std::vector<std::size_t> children) {
    Node n;
    n.kind = NodeKind::Chance;
    n.actions = std::move(actions);
    n.probs = std::move(probs);
    n.children = std::move(children);
    return n;
}

Node Node::leaf(std::vector<double> payoffs) {
    Node n;
    n.kind = NodeKind::Leaf;
    n.payoffs = std::move(payoffs);
    return n;
}

std::size_t GameTree::player_index(const std::string& name) const {
    for (std::size_t i = 0; i < players.size(); ++i)
        if (players[i] == name) return i;
    throw ValidationError("unknown player '" + name + "'");
}

const InfoSet* GameTree::find_set(const std::string& label) const {
    for (const auto& s : info_sets)
        if (s.label == label) return &s;
    return nullptr;
}

std::vector<std::size_t> GameTree::leaves() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].kind == NodeKind::Leaf) out.push_back(i);
    return out;
}

std::vector<std::string> GameTree::leaf_labels() const {
    std::vector<std::string> labels(nodes.size());
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        const Node& n = nodes[i];
        for (std::size_t a = 0; a < n.children.size(); ++a) {
            std::string step = a < n.actions.size() ? n.actions[a] : "?";
            labels[n.children[a]] =
                labels[i].empty() ? step : labels[i] + "/" + step;
            stack.push_back(n.children[a]);
        }
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].kind == NodeKind::Leaf) out.push_back(labels[i]);
    return out;
}

std::vector<const InfoSet*> GameTree::sets_of(const std::string& player) const {
    std::vector<const InfoSet*> out;
    for (const auto& s : info_sets)
        if (s.owner == player) out.push_back(&s);
    return out;
}

std::optional<std::size_t> GameTree::node_set_index(std::size_t node) const {
    for (std::size_t i = 0; i < info_sets.size(); ++i)
        for (std::size_t n : info_sets[i].nodes)
            if (n == node) return i;
    return std::nullopt;
}

void GameTree::validate() const {
    if (players.empty()) throw ValidationError("tree has no players");
    if (nodes.empty()) throw ValidationError("tree has no nodes");
    std::set<std::string> seen_players(players.begin(), players.end());
    if (seen_players.size() != players.size())
        throw ValidationError("duplicate player name");

    std::vector<int> parents(nodes.size(), 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& n = nodes[i];
        switch (n.kind) {
            case NodeKind::Decision:
                if (!seen_players.count(n.owner))
                    throw ValidationError("node " + std::to_string(i) +
                                          " owned by unknown player '" + n.owner + "'");
                if (n.actions.empty())
                    throw ValidationError("decision node " + std::to_string(i) +
                                          " has no actions");
                if (n.actions.size() != n.children.size())
                    throw ValidationError("decision node " + std::to_string(i) +
                                          " actions/children mismatch");
                if (!n.probs.empty() || !n.payoffs.empty())
                    throw ValidationError("decision node " + std::to_string(i) +
                                          " carries probs or payoffs");
                break;
            case NodeKind::Chance: {
                if (n.children.empty())
                    throw ValidationError("chance node " + std::to_string(i) +
                                          " has no children");
                if (n.probs.size() != n.children.size() ||
                    n.actions.size() != n.children.size())
                    throw ValidationError("chance node " + std::to_string(i) +
                                          " labels/probs/children mismatch");
                double sum = 0.0;
                for (double p : n.probs) {
                    if (!(p >= 0.0) || !(p <= 1.0) || !std::isfinite(p))
                        throw ValidationError("chance node " + std::to_string(i) +
                                              " has probability outside [0,1]");
                    sum += p;
                }
                if (std::fabs(sum - 1.0) > 1e-12)
                    throw ValidationError("chance node " + std::to_string(i) +
                                          " probabilities sum to " + full_precision(sum));
                break;
            }
            case NodeKind::Leaf:
                if (!n.children.empty())
                    throw ValidationError("leaf " + std::to_string(i) + " has children");
                if (n.payoffs.size() != players.size())
                    throw ValidationError("leaf " + std::to_string(i) + " has " +
                                          std::to_string(n.payoffs.size()) +
                                          " payoffs for " +
                                          std::to_string(players.size()) + " players");
                break;
        }
        for (std::size_t c : n.children) {
            if (c >= nodes.size())
                throw ValidationError("node " + std::to_string(i) +
                                      " references missing child " + std::to_string(c));
            if (c == 0) throw ValidationError("root appears as a child");
            parents[c] += 1;
        }
    }
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (parents[i] == 0)
            throw ValidationError("node " + std::to_string(i) +
                                  " is unreachable from the root");
        if (parents[i] > 1)
            throw ValidationError("node " + std::to_string(i) + " has " +
                                  std::to_string(parents[i]) + " parents");
    }
    // Single-parent plus all-reachable rules out cycles only if parents
    // precede children along every path; walk from the root to be sure.
    std::vector<char> reached(nodes.size(), 0);
    std::vector<std::size_t> stack{0};
    reached[0] = 1;
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t c : nodes[i].children) {
            if (reached[c])
                throw ValidationError("node " + std::to_string(c) + " reached twice");
            reached[c] = 1;
            stack.push_back(c);
        }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (!reached[i])
            throw ValidationError("node " + std::to_string(i) +
                                  " is not reachable from the root");

    std::vector<int> covered(nodes.size(), 0);
    std::set<std::string> labels;
    for (std::size_t s = 0; s < info_sets.size(); ++s) {
        const InfoSet& set = info_sets[s];
        if (set.label.empty())
            throw ValidationError("information set " + std::to_string(s) +
                                  " has an empty label");
        if (!labels.insert(set.label).second)
            throw ValidationError("duplicate information set label '" + set.label + "'");
        if (!seen_players.count(set.owner))
            throw ValidationError("information set '" + set.label +
                                  "' owned by unknown player '" + set.owner + "'");
        if (set.nodes.empty())
            throw ValidationError("information set '" + set.label + "' is empty");
        const Node* first = nullptr;
        for (std::size_t n : set.nodes) {
            if (n >= nodes.size())
                throw ValidationError("information set '" + set.label +
                                      "' references missing node " + std::to_string(n));
            const Node& node = nodes[n];
            if (node.kind != NodeKind::Decision)
                throw ValidationError("information set '" + set.label +
                                      "' contains non-decision node " + std::to_string(n));
            if (node.owner != set.owner)
                throw ValidationError("information set '" + set.label +
                                      "' mixes owners");
            if (!first) first = &node;
            else if (node.actions != first->actions)
                throw ValidationError("information set '" + set.label +
                                      "' has differing action lists");
            covered[n] += 1;
        }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].kind != NodeKind::Decision) continue;
        if (covered[i] == 0)
            throw ValidationError("decision node " + std::to_string(i) +
                                  " belongs to no information set");
        if (covered[i] > 1)
            throw ValidationError("decision node " + std::to_string(i) +
                                  " belongs to several information sets");
    }
}

const std::vector<double>* StrategyProfile::find(const std::string& set_label) const {
    for (const auto& [player, strat] : by_player) {
        auto it = strat.dist.find(set_label);
        if (it != strat.dist.end()) return &it->second;
    }
    return nullptr;
}

void StrategyProfile::set(const std::string& player, const std::string& set_label,
                          std::vector<double> dist) {
    by_player[player].dist[set_label] = std::move(dist);
}

namespace {

const char* kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Decision: return "decision";
        case NodeKind::Chance: return "chance";
        case NodeKind::Leaf: return "leaf";
    }
    return "leaf";
}

NodeKind kind_from(const std::string& name) {
    if (name == "decision") return NodeKind::Decision;
    if (name == "chance") return NodeKind::Chance;
    if (name == "leaf") return NodeKind::Leaf;
    throw ValidationError("unknown node kind '" + name + "'");
}

}  // namespace

std::string tree_to_json(const GameTree& tree) {
    nlohmann::json j;
    j["players"] = tree.players;
    j["nodes"] = nlohmann::json::array();
    for (const Node& n : tree.nodes) {
        nlohmann::json jn;
        jn["kind"] = kind_name(n.kind);
        switch (n.kind) {
            case NodeKind::Decision:
                jn["owner"] = n.owner;
                jn["actions"] = n.actions;
                jn["children"] = n.children;
                break;
            case NodeKind::Chance:
                jn["actions"] = n.actions;
                jn["probs"] = n.probs;
                jn["children"] = n.children;
                break;
            case NodeKind::Leaf:
                jn["payoffs"] = n.payoffs;
                break;
        }
        j["nodes"].push_back(std::move(jn));
    }
    j["info_sets"] = nlohmann::json::array();
    for (const InfoSet& s : tree.info_sets) {
        nlohmann::json js;
        js["owner"] = s.owner;
        js["label"] = s.label;
        js["nodes"] = s.nodes;
        j["info_sets"].push_back(std::move(js));
    }
    return j.dump(2) + "\n";
}

GameTree tree_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad tree JSON: ") + e.what());
    }
    GameTree tree;
    try {
        tree.players = j.at("players").get<std::vector<std::string>>();
        for (const auto& jn : j.at("nodes")) {
            Node n;
            n.kind = kind_from(jn.at("kind").get<std::string>());
            if (jn.contains("owner")) n.owner = jn["owner"].get<std::string>();
            if (jn.contains("actions"))
                n.actions = jn["actions"].get<std::vector<std::string>>();
            if (jn.contains("children"))
                n.children = jn["children"].get<std::vector<std::size_t>>();
            if (jn.contains("probs"))
                n.probs = jn["probs"].get<std::vector<double>>();
            if (jn.contains("payoffs"))
                n.payoffs = jn["payoffs"].get<std::vector<double>>();
            tree.nodes.push_back(std::move(n));
        }
        for (const auto& js : j.at("info_sets")) {
            InfoSet s;
            s.owner = js.at("owner").get<std::string>();
            s.label = js.at("label").get<std::string>();
            s.nodes = js.at("nodes").get<std::vector<std::size_t>>();
            tree.info_sets.push_back(std::move(s));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad tree JSON: ") + e.what());
    }
    tree.validate();
    return tree;
}

}  // namespace rollup
