#include "rollup/montecarlo.hpp"
#include "rollup/common.hpp"
#include "rollup/games.hpp"

#include <json.hpp>

#include <cmath>

namespace rollup {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

std::uint64_t SplitMix64::next() {
    state += kGolden;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

SplitMix64 round_stream(std::uint64_t seed, std::uint64_t round) {
    // Mix the round index through one generator step so that streams for
    // neighboring rounds share no arithmetic progression of states.
    SplitMix64 keyer{seed ^ ((round + 1) * kGolden)};
    return SplitMix64{keyer.next()};
}

std::vector<std::uint64_t> sample_leaf_counts(const GameTree& tree,
                                              const StrategyProfile& profile,
                                              std::uint64_t seed,
                                              std::uint64_t first_round,
                                              std::uint64_t n_rounds) {
    tree.validate();
    auto leaf_nodes = tree.leaves();
    std::vector<std::size_t> slot_of(tree.nodes.size(), 0);
    for (std::size_t s = 0; s < leaf_nodes.size(); ++s) slot_of[leaf_nodes[s]] = s;

    // Resolve and validate every distribution once, not per round.
    std::vector<const std::vector<double>*> dist_of(tree.nodes.size(), nullptr);
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const Node& node = tree.nodes[i];
        if (node.kind == NodeKind::Chance) {
            dist_of[i] = &node.probs;
            continue;
        }
        if (node.kind != NodeKind::Decision) continue;
        const InfoSet& set = tree.info_sets[*tree.node_set_index(i)];
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
            throw ValidationError("distribution for '" + set.label +
                                  "' has the wrong arity");
        double sum = 0.0;
        for (double p : *dist) {
            if (!(p >= 0.0) || !std::isfinite(p))
                throw ValidationError("distribution for '" + set.label +
                                      "' has a negative entry");
            sum += p;
        }
        if (std::fabs(sum - 1.0) > 1e-12)
            throw ValidationError("distribution for '" + set.label + "' sums to " +
                                  full_precision(sum));
        dist_of[i] = dist;
    }

    std::vector<std::uint64_t> counts(leaf_nodes.size(), 0);
    for (std::uint64_t r = first_round; r < first_round + n_rounds; ++r) {
        SplitMix64 rng = round_stream(seed, r);
        std::size_t node = 0;
        while (tree.nodes[node].kind != NodeKind::Leaf) {
            const std::vector<double>& dist = *dist_of[node];
            double u = rng.next_unit();
            double cum = 0.0;
            std::size_t pick = 0;
            // If rounding leaves u >= total mass, the last positive action wins.
            for (std::size_t a = 0; a < dist.size(); ++a) {
                if (dist[a] == 0.0) continue;
                cum += dist[a];
                pick = a;
                if (u < cum) break;
            }
            node = tree.nodes[node].children[pick];
        }
        counts[slot_of[node]] += 1;
    }
    return counts;
}

namespace {

SimulationReport report_from_counts(const GameTree& tree,
                                    std::vector<std::uint64_t> counts,
                                    std::uint64_t rounds, std::uint64_t seed,
                                    const std::vector<double>& burn_per_leaf,
                                    const std::string& label) {
    SimulationReport report;
    report.game = label;
    report.rounds = rounds;
    report.seed = seed;
    report.generator = "splitmix64-counter";
    report.players = tree.players;
    report.leaf_labels = tree.leaf_labels();
    report.leaf_counts = std::move(counts);

    auto leaf_nodes = tree.leaves();
    const double n = static_cast<double>(rounds);
    for (std::size_t k = 0; k < tree.players.size(); ++k) {
        double sum = 0.0;
        for (std::size_t s = 0; s < leaf_nodes.size(); ++s)
            sum += static_cast<double>(report.leaf_counts[s]) *
                   tree.nodes[leaf_nodes[s]].payoffs[k];
        double mean = sum / n;
        double sq = 0.0;
        for (std::size_t s = 0; s < leaf_nodes.size(); ++s) {
            double d = tree.nodes[leaf_nodes[s]].payoffs[k] - mean;
            sq += static_cast<double>(report.leaf_counts[s]) * d * d;
        }
        double var = rounds > 1 ? sq / (n - 1.0) : 0.0;
        report.mean.push_back(mean);
        report.std_error.push_back(std::sqrt(std::max(var, 0.0) / n));
    }
    for (std::size_t s = 0; s < leaf_nodes.size(); ++s) {
        double burn = s < burn_per_leaf.size() ? burn_per_leaf[s] : 0.0;
        report.burned_total += static_cast<double>(report.leaf_counts[s]) * burn;
    }
    return report;
}

}  // namespace

SimulationReport simulate_tree(const GameTree& tree, const StrategyProfile& profile,
                               std::uint64_t rounds, std::uint64_t seed,
                               const std::vector<double>& burn_per_leaf,
                               const std::string& label) {
    if (rounds < 1) throw ValidationError("rounds must be at least 1");
    auto counts = sample_leaf_counts(tree, profile, seed, 0, rounds);
    return report_from_counts(tree, std::move(counts), rounds, seed, burn_per_leaf,
                              label);
}

SimulationReport simulate_game2(const ProtocolParams& params, const MixPoint& mix,
                                std::uint64_t rounds, std::uint64_t seed) {
    GameTree tree = build_game2(params);
    StrategyProfile profile = game2_profile(mix);
    // Slots 2 and 6 are the caught-dishonest leaves; V receives half the
    // slashed stake, the other half leaves the system.
    std::vector<double> burn(8, 0.0);
    burn[2] = burn[6] = 0.5 * params.s_A;
    return simulate_tree(tree, profile, rounds, seed, burn, "game2");
}

SimulationReport simulate_game3(const ProtocolParams& params, double honest_prob,
                                std::uint64_t rounds, std::uint64_t seed) {
    params.validate();
    if (!params.p) throw ValidationError("the random-check simulation needs p");
    if (rounds < 1) throw ValidationError("rounds must be at least 1");
    if (!(honest_prob >= 0.0) || !(honest_prob <= 1.0))
        throw ValidationError("honest_prob must lie in [0,1]");
    const double p = *params.p;

    // The tree builder insists on 0 < p < 1; the simulator happily runs the
    // degenerate edges, so it draws rounds directly from the leaf table.
    std::vector<std::uint64_t> counts(4, 0);
    for (std::uint64_t r = 0; r < rounds; ++r) {
        SplitMix64 rng = round_stream(seed, r);
        bool honest = rng.next_unit() < honest_prob;
        bool checked = rng.next_unit() < p;
        std::size_t slot = (honest ? 0 : 2) + (checked ? 0 : 1);
        counts[slot] += 1;
    }

    SimulationReport report;
    report.game = "game3";
    report.rounds = rounds;
    report.seed = seed;
    report.generator = "splitmix64-counter";
    report.players = {"A", "C"};
    report.leaf_labels = {"Honest/Check", "Honest/No", "Dishonest/Check",
                          "Dishonest/No"};
    report.leaf_counts = counts;

    const double payoff_A[4] = {0.0, 0.0, -params.s_A, params.z};
    const double n = static_cast<double>(rounds);
    double sum = 0.0;
    for (int s = 0; s < 4; ++s) sum += static_cast<double>(counts[s]) * payoff_A[s];
    double mean = sum / n;
    double sq = 0.0;
    for (int s = 0; s < 4; ++s) {
        double d = payoff_A[s] - mean;
        sq += static_cast<double>(counts[s]) * d * d;
    }
    double var = rounds > 1 ? sq / (n - 1.0) : 0.0;
    report.mean = {mean, 0.0};
    report.std_error = {std::sqrt(std::max(var, 0.0) / n), 0.0};
    // A caught attack slashes the whole stake; nobody here receives it.
    report.burned_total = static_cast<double>(counts[2]) * params.s_A;
    return report;
}

ConvergenceCheck convergence_check(const SimulationReport& report,
                                   const std::vector<double>& analytic,
                                   double k_sigma) {
    if (report.rounds < 100)
        throw ValidationError("convergence check needs at least 100 rounds");
    if (analytic.size() != report.mean.size())
        throw ValidationError("analytic vector arity mismatch");
    ConvergenceCheck check;
    check.all_pass = true;
    for (std::size_t k = 0; k < analytic.size(); ++k) {
        double dev = std::fabs(report.mean[k] - analytic[k]);
        bool ok;
        if (report.std_error[k] == 0.0) {
            ok = dev == 0.0;
            if (!ok) check.exact_mismatch = true;
        } else {
            ok = dev <= k_sigma * report.std_error[k];
        }
        check.pass.push_back(ok);
        check.deviation.push_back(dev);
        check.all_pass = check.all_pass && ok;
    }
    return check;
}

std::string report_to_json(const SimulationReport& report) {
    nlohmann::json j;
    j["game"] = report.game;
    j["rounds"] = report.rounds;
    j["seed"] = report.seed;
    j["generator"] = report.generator;
    j["players"] = report.players;
    j["mean"] = report.mean;
    j["std_error"] = report.std_error;
    j["leaf_labels"] = report.leaf_labels;
    j["leaf_counts"] = report.leaf_counts;
    j["burned_total"] = report.burned_total;
    return j.dump(2) + "\n";
}

SimulationReport report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        SimulationReport report;
        report.game = j.at("game").get<std::string>();
        report.rounds = j.at("rounds").get<std::uint64_t>();
        report.seed = j.at("seed").get<std::uint64_t>();
        report.generator = j.at("generator").get<std::string>();
        report.players = j.at("players").get<std::vector<std::string>>();
        report.mean = j.at("mean").get<std::vector<double>>();
        report.std_error = j.at("std_error").get<std::vector<double>>();
        report.leaf_labels = j.at("leaf_labels").get<std::vector<std::string>>();
        report.leaf_counts = j.at("leaf_counts").get<std::vector<std::uint64_t>>();
        report.burned_total = j.at("burned_total").get<double>();
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad report JSON: ") + e.what());
    }
}

}  // namespace rollup
