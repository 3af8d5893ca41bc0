#include "rollup/common.hpp"
#include "rollup/engine.hpp"
#include "rollup/equilibria.hpp"
#include "rollup/game_tree.hpp"
#include "rollup/games.hpp"
#include "rollup/montecarlo.hpp"
#include "rollup/params.hpp"
#include "rollup/rational.hpp"
#include "rollup/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace rollup;

// Raw flag values; strings so "1/24" stays exact for rational mode.
struct ParamFlags {
    std::string config;
    std::string f, w, s_A, s_V, x, z, y, u_T, p;

    bool any_field() const {
        return !(f.empty() && w.empty() && s_A.empty() && s_V.empty() &&
                 x.empty() && z.empty() && y.empty() && u_T.empty() && p.empty());
    }
};

void add_param_flags(CLI::App* cmd, ParamFlags& flags) {
    // --h is a game parameter, so help must not own the short -h.
    cmd->set_help_flag("--help", "print this help and exit");
    cmd->add_option("--config", flags.config, "parameter file (key=value or JSON)");
    cmd->add_option("--f", flags.f, "transaction fee");
    cmd->add_option("--w", flags.w, "aggregation cost");
    cmd->add_option("--sA", flags.s_A, "aggregator stake");
    cmd->add_option("--sV", flags.s_V, "validator stake");
    cmd->add_option("--x", flags.x, "validation cost");
    cmd->add_option("--z", flags.z, "extractable attack value");
    cmd->add_option("--y", flags.y, "whistleblower bonus on searched rounds");
    cmd->add_option("--uT", flags.u_T, "transactor gross utility");
    cmd->add_option("--p", flags.p, "exogenous check probability");
}

ProtocolParams resolve_params(const ParamFlags& flags, const ProtocolParams& base) {
    ProtocolParams params = flags.config.empty() ? base : load_params(flags.config);
    if (!flags.f.empty()) params.f = parse_number(flags.f);
    if (!flags.w.empty()) params.w = parse_number(flags.w);
    if (!flags.s_A.empty()) params.s_A = parse_number(flags.s_A);
    if (!flags.s_V.empty()) params.s_V = parse_number(flags.s_V);
    if (!flags.x.empty()) params.x = parse_number(flags.x);
    if (!flags.z.empty()) params.z = parse_number(flags.z);
    if (!flags.y.empty()) params.y = parse_number(flags.y);
    if (!flags.u_T.empty()) params.u_T = parse_number(flags.u_T);
    if (!flags.p.empty()) params.p = parse_number(flags.p);
    params.validate();
    return params;
}

void print_ordinal_warnings(const ProtocolParams& params) {
    for (const auto& warning : ordinal_check(params).warnings)
        std::cerr << "warning: " << warning << "\n";
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(out_path);
    if (!file) throw ValidationError("cannot write to '" + out_path + "'");
    file << text;
}

Rational rational_field(const std::string& raw, double fallback) {
    return raw.empty() ? Rational(fallback) : parse_rational(raw);
}

std::string rational_str(const Rational& r) {
    std::ostringstream out;
    out << r;
    return out.str();
}

int cmd_solve(const ParamFlags& flags, const std::string& b_raw,
              const std::string& b_grid, bool exact, bool as_json,
              const std::string& out_path) {
    ProtocolParams params = resolve_params(flags, ProtocolParams{});
    print_ordinal_warnings(params);

    if (!b_grid.empty()) {
        if (exact)
            throw ValidationError("--exact solves a single --b, not a grid");
        auto grid = parse_grid(b_grid);
        for (double b : grid)
            if (b < 0.0 || b > 1.0)
                throw ValidationError("b grid must lie within [0,1]");
        auto points = sweep_curve(params, grid);
        write_output(curve_csv(points, grid), out_path);
        return 0;
    }
    if (b_raw.empty())
        throw ValidationError("provide --b or --b-grid");

    if (exact) {
        ExactPoint pt = solve_point_exact(
            rational_field(flags.s_A, params.s_A), rational_field(flags.s_V, params.s_V),
            rational_field(flags.x, params.x), rational_field(flags.z, params.z),
            parse_rational(b_raw));
        if (!pt.viable) {
            std::cerr << "non-viable: exact point has g = " << pt.g << ", h = "
                      << pt.h << " outside (0,1)\n";
            return 3;
        }
        std::ostringstream out;
        if (as_json) {
            nlohmann::json j;
            j["b"] = rational_str(parse_rational(b_raw));
            j["g"] = rational_str(pt.g);
            j["h"] = rational_str(pt.h);
            j["residual_A"] = rational_str(pt.residual_A);
            j["residual_V"] = rational_str(pt.residual_V);
            j["viable"] = pt.viable;
            out << j.dump(2) << "\n";
        } else {
            out << "b = " << parse_rational(b_raw) << "\n"
                << "g = " << pt.g << "\n"
                << "h = " << pt.h << "\n"
                << "residual_A = " << pt.residual_A << "\n"
                << "residual_V = " << pt.residual_V << "\n"
                << "viable = true\n";
        }
        write_output(out.str(), out_path);
        return 0;
    }

    EquilibriumPoint pt = solve_point(params, parse_number(b_raw));
    if (!pt.viable) {
        std::cerr << "non-viable: " << pt.note << "\n";
        return 3;
    }
    std::ostringstream out;
    if (as_json) {
        nlohmann::json j;
        j["b"] = pt.mix.b;
        j["g"] = pt.mix.g;
        j["h"] = pt.mix.h;
        j["residual_A"] = pt.residual_A;
        j["residual_V"] = pt.residual_V;
        j["regret_A"] = pt.regret_A;
        j["regret_V"] = pt.regret_V;
        j["viable"] = pt.viable;
        j["b_above_g_bound"] = pt.b_above_g_bound;
        j["b_above_h_bound"] = pt.b_above_h_bound;
        out << j.dump(2) << "\n";
    } else {
        out << "b = " << full_precision(pt.mix.b) << "\n"
            << "g = " << full_precision(pt.mix.g) << "\n"
            << "h = " << full_precision(pt.mix.h) << "\n"
            << "residual_A = " << full_precision(pt.residual_A) << "\n"
            << "residual_V = " << full_precision(pt.residual_V) << "\n"
            << "regret_A = " << full_precision(pt.regret_A) << "\n"
            << "regret_V = " << full_precision(pt.regret_V) << "\n"
            << "viable = true\n";
    }
    write_output(out.str(), out_path);
    return 0;
}

int cmd_simulate(const ParamFlags& flags, const std::string& game,
                 const std::string& b_raw, const std::string& g_raw,
                 const std::string& h_raw, std::uint64_t rounds,
                 std::uint64_t seed, double k_sigma, const std::string& out_path) {
    ProtocolParams params = resolve_params(flags, ProtocolParams{});
    print_ordinal_warnings(params);

    SimulationReport report;
    std::vector<double> analytic;
    if (game == "2") {
        if (b_raw.empty() || g_raw.empty() || h_raw.empty())
            throw ValidationError("simulate --game 2 needs --b, --g, and --h");
        MixPoint mix{parse_number(b_raw), parse_number(g_raw), parse_number(h_raw)};
        report = simulate_game2(params, mix, rounds, seed);
        analytic = {aggregator_utility(params, mix), validator_utility(params, mix)};
    } else if (game == "3") {
        if (h_raw.empty())
            throw ValidationError("simulate --game 3 needs --h (honest probability)");
        if (!params.p)
            throw ValidationError("simulate --game 3 needs --p");
        double honest = parse_number(h_raw);
        report = simulate_game3(params, honest, rounds, seed);
        analytic = {(1.0 - honest) * ((1.0 - *params.p) * params.z -
                                      *params.p * params.s_A),
                    0.0};
    } else {
        throw ValidationError("--game must be 2 or 3");
    }

    nlohmann::json j = nlohmann::json::parse(report_to_json(report));
    j["analytic"] = analytic;
    bool failed = false;
    if (rounds >= 100) {
        ConvergenceCheck check = convergence_check(report, analytic, k_sigma);
        j["convergence"] = {{"pass", check.pass},
                            {"deviation", check.deviation},
                            {"exact_mismatch", check.exact_mismatch},
                            {"all_pass", check.all_pass}};
        failed = !check.all_pass;
    }
    write_output(j.dump(2) + "\n", out_path);
    return failed ? 1 : 0;
}

int cmd_thresholds(const ParamFlags& flags, const std::string& b_raw,
                   const std::string& g_raw, const std::string& h_raw,
                   bool as_json, const std::string& out_path) {
    ProtocolParams params = resolve_params(flags, ProtocolParams{});
    print_ordinal_warnings(params);

    double p_star = random_check_threshold(params);
    double y_min = easter_egg_min_reward(params);
    LowerBounds bounds = viability_b_lower(params);
    std::optional<BoundedValue> u_T_min;
    if (!b_raw.empty() && !g_raw.empty() && !h_raw.empty()) {
        MixPoint mix{parse_number(b_raw), parse_number(g_raw), parse_number(h_raw)};
        u_T_min = transactor_min_utility(params, mix);
    }

    std::ostringstream out;
    if (as_json) {
        nlohmann::json j;
        j["p_star"] = p_star;
        j["y_min"] = y_min;
        j["b_min_from_g"] = bounds.from_g;
        j["b_min_from_h"] = bounds.from_h_window;
        j["b_min_from_h_always_satisfied"] = bounds.h_always_satisfied;
        if (u_T_min) {
            if (u_T_min->viable) j["u_T_min"] = u_T_min->value;
            else j["u_T_min_note"] = u_T_min->note;
        }
        out << j.dump(2) << "\n";
    } else {
        out << "p_star = " << full_precision(p_star) << "\n"
            << "y_min = " << full_precision(y_min) << "\n"
            << "b_min_from_g = " << full_precision(bounds.from_g) << "\n"
            << "b_min_from_h = " << full_precision(bounds.from_h_window)
            << (bounds.h_always_satisfied ? " (always satisfied)" : "") << "\n";
        if (u_T_min) {
            if (u_T_min->viable)
                out << "u_T_min = " << full_precision(u_T_min->value) << "\n";
            else
                out << "u_T_min = " << u_T_min->note << "\n";
        }
    }
    write_output(out.str(), out_path);
    return 0;
}

ProtocolParams reference_scenario() {
    ProtocolParams params;
    params.f = 1.0;
    params.w = 0.5;
    params.s_A = 1.0;
    params.s_V = 1.0;
    params.x = 1.0 / 24.0;
    params.z = 24.0;
    return params;
}

int cmd_verify(const ParamFlags& flags, const VerifyOptions& options,
               bool as_json, const std::string& out_path) {
    ProtocolParams params = resolve_params(flags, reference_scenario());
    auto results = run_verification(params, options);

    std::ostringstream out;
    int failed = 0;
    if (as_json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : results) {
            j.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
            if (!r.pass) ++failed;
        }
        out << j.dump(2) << "\n";
    } else {
        for (const auto& r : results) {
            out << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  (" << r.detail
                << ")\n";
            if (!r.pass) ++failed;
        }
        out << (results.size() - failed) << "/" << results.size()
            << " checks passed\n";
    }
    write_output(out.str(), out_path);
    return failed > 0 ? 1 : 0;
}

int cmd_audit(const ParamFlags& flags, const std::string& game,
              const std::string& tree_path, const std::string& b_raw,
              const std::string& g_raw, const std::string& h_raw,
              const std::string& dump_path, bool as_json,
              const std::string& out_path) {
    GameTree tree;
    std::optional<StrategyProfile> profile;
    std::vector<std::string> tied_sets;
    std::string label;

    if (!tree_path.empty()) {
        std::ifstream file(tree_path);
        if (!file) throw ValidationError("cannot open tree file '" + tree_path + "'");
        std::ostringstream buf;
        buf << file.rdbuf();
        tree = tree_from_json(buf.str());
        label = tree_path;
        bool perfect = true;
        for (const auto& set : tree.info_sets)
            perfect = perfect && set.nodes.size() == 1;
        if (perfect) {
            auto bi = backward_induction(tree);
            profile = bi.profile;
            tied_sets = bi.tied_sets;
        }
    } else {
        ProtocolParams params = resolve_params(flags, ProtocolParams{});
        print_ordinal_warnings(params);
        label = "game" + game;
        if (game == "1") {
            tree = build_game1(params);
            auto bi = backward_induction(tree);
            profile = bi.profile;
            tied_sets = bi.tied_sets;
        } else if (game == "2" || game == "easter") {
            tree = game == "2" ? build_game2(params) : build_game2_easter(params);
            if (game == "easter") label = "game2-easter";
            if (!b_raw.empty() && !g_raw.empty() && !h_raw.empty())
                profile = game2_profile({parse_number(b_raw), parse_number(g_raw),
                                         parse_number(h_raw)});
            else if (dump_path.empty())
                throw ValidationError("audit of the search game needs --b, --g, --h");
        } else if (game == "3") {
            tree = build_game3(params);
            if (!h_raw.empty())
                profile = game3_profile(parse_number(h_raw));
            else if (dump_path.empty())
                throw ValidationError(
                    "audit of the random-check game needs --h (honest probability)");
        } else {
            throw ValidationError("--game must be 1, 2, 3, or easter");
        }
    }

    if (!dump_path.empty()) write_output(tree_to_json(tree), dump_path);

    std::ostringstream out;
    nlohmann::json j;
    j["game"] = label;
    j["players"] = tree.players;
    j["nodes"] = tree.nodes.size();
    j["leaves"] = tree.leaves().size();
    j["info_sets"] = tree.info_sets.size();
    if (profile) {
        auto values = expected_utilities(tree, *profile);
        auto regrets = regret_audit(tree, *profile);
        if (as_json) {
            j["value"] = values;
            j["regrets"] = nlohmann::json::array();
            for (const auto& r : regrets)
                j["regrets"].push_back({{"player", r.player},
                                        {"current", r.current},
                                        {"best", r.best},
                                        {"regret", r.regret}});
            j["tied_sets"] = tied_sets;
        } else {
            out << "game = " << label << "\n";
            for (const auto& r : regrets)
                out << r.player << ": value = " << full_precision(r.current)
                    << ", best_response = " << full_precision(r.best)
                    << ", regret = " << full_precision(r.regret) << "\n";
            if (!tied_sets.empty()) {
                out << "tied_sets =";
                for (const auto& t : tied_sets) out << " " << t;
                out << "\n";
            }
        }
    } else if (!as_json) {
        out << "game = " << label << "\n"
            << "players = " << tree.players.size() << ", nodes = "
            << tree.nodes.size() << ", leaves = " << tree.leaves().size()
            << ", info_sets = " << tree.info_sets.size() << "\n";
    }
    if (as_json) out << j.dump(2) << "\n";
    write_output(out.str(), out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Staking-game analysis toolkit: equilibrium curves, mechanism "
                 "thresholds, tree audits, and seeded simulation"};
    app.require_subcommand(1);
    // --h is a game parameter, so help must not own the short -h.
    app.set_help_flag("--help", "print this help and exit");

    ParamFlags solve_flags;
    std::string solve_b, solve_grid, solve_out;
    bool solve_exact = false, solve_json = false;
    auto* solve = app.add_subcommand("solve", "solve the indifference point(s) for b");
    add_param_flags(solve, solve_flags);
    solve->add_option("--b", solve_b, "no-search probability");
    solve->add_option("--b-grid", solve_grid, "lo:hi:step sweep over b");
    solve->add_flag("--exact", solve_exact, "exact rational arithmetic");
    solve->add_flag("--json", solve_json, "JSON output");
    solve->add_option("--out", solve_out, "output path (default stdout)");

    ParamFlags sim_flags;
    std::string sim_game, sim_b, sim_g, sim_h, sim_out;
    std::uint64_t sim_rounds = 100000, sim_seed = 42;
    double sim_k_sigma = 4.0;
    auto* simulate = app.add_subcommand("simulate", "run seeded protocol rounds");
    add_param_flags(simulate, sim_flags);
    simulate->add_option("--game", sim_game, "2 or 3")->required();
    simulate->add_option("--b", sim_b, "no-search probability (game 2)");
    simulate->add_option("--g", sim_g, "blind challenge probability (game 2)");
    simulate->add_option("--h", sim_h, "honest probability");
    simulate->add_option("--rounds", sim_rounds, "rounds to simulate");
    simulate->add_option("--seed", sim_seed, "RNG seed");
    simulate->add_option("--k-sigma", sim_k_sigma, "convergence band width");
    simulate->add_option("--out", sim_out, "output path (default stdout)");

    ParamFlags thr_flags;
    std::string thr_b, thr_g, thr_h, thr_out;
    bool thr_json = false;
    auto* thresholds = app.add_subcommand("thresholds", "mechanism thresholds");
    add_param_flags(thresholds, thr_flags);
    thresholds->add_option("--b", thr_b, "mix point for the transactor bound");
    thresholds->add_option("--g", thr_g, "mix point for the transactor bound");
    thresholds->add_option("--h", thr_h, "mix point for the transactor bound");
    thresholds->add_flag("--json", thr_json, "JSON output");
    thresholds->add_option("--out", thr_out, "output path (default stdout)");

    ParamFlags verify_flags;
    VerifyOptions verify_options;
    std::string verify_b, verify_out;
    bool verify_json = false;
    auto* verify = app.add_subcommand("verify", "run the self-check suite");
    add_param_flags(verify, verify_flags);
    verify->add_option("--seed", verify_options.seed, "RNG seed for the sweeps");
    verify->add_option("--draws", verify_options.consistency_draws,
                       "random draws for consistency checks");
    verify->add_option("--param-sets", verify_options.random_param_sets,
                       "random parameter sets for the induction sweep");
    verify->add_option("--b", verify_b, "b for the point checks");
    verify->add_option("--inject-fault", verify_options.inject_payoff_fault,
                       "perturb one payoff to prove the checks can fail");
    verify->add_flag("--json", verify_json, "JSON output");
    verify->add_option("--out", verify_out, "output path (default stdout)");

    ParamFlags audit_flags;
    std::string audit_game = "2", audit_tree, audit_b, audit_g, audit_h;
    std::string audit_dump, audit_out;
    bool audit_json = false;
    auto* audit = app.add_subcommand("audit", "evaluate and inspect a game tree");
    add_param_flags(audit, audit_flags);
    audit->add_option("--game", audit_game, "1, 2, 3, or easter");
    audit->add_option("--tree", audit_tree, "audit a serialized tree instead");
    audit->add_option("--b", audit_b, "no-search probability (game 2)");
    audit->add_option("--g", audit_g, "blind challenge probability (game 2)");
    audit->add_option("--h", audit_h, "honest probability");
    audit->add_option("--dump-tree", audit_dump, "write the tree as JSON here");
    audit->add_flag("--json", audit_json, "JSON output");
    audit->add_option("--out", audit_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed())
            return cmd_solve(solve_flags, solve_b, solve_grid, solve_exact,
                             solve_json, solve_out);
        if (simulate->parsed())
            return cmd_simulate(sim_flags, sim_game, sim_b, sim_g, sim_h,
                                sim_rounds, sim_seed, sim_k_sigma, sim_out);
        if (thresholds->parsed())
            return cmd_thresholds(thr_flags, thr_b, thr_g, thr_h, thr_json, thr_out);
        if (verify->parsed()) {
            if (!verify_b.empty()) verify_options.b = parse_number(verify_b);
            return cmd_verify(verify_flags, verify_options, verify_json, verify_out);
        }
        if (audit->parsed())
            return cmd_audit(audit_flags, audit_game, audit_tree, audit_b, audit_g,
                             audit_h, audit_dump, audit_json, audit_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
