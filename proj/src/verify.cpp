#include "rollup/verify.hpp"
#include "rollup/common.hpp"
#include "rollup/engine.hpp"
#include "rollup/equilibria.hpp"
#include "rollup/games.hpp"
#include "rollup/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rollup {

namespace {

double uniform(SplitMix64& rng, double lo, double hi) {
    return lo + rng.next_unit() * (hi - lo);
}

bool is_one_hot(const std::vector<double>& dist, std::size_t index) {
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (dist[i] != (i == index ? 1.0 : 0.0)) return false;
    return true;
}

CheckResult check_backward_induction(const VerifyOptions& options) {
    CheckResult result{"backward-induction-honest-equilibrium", true, ""};
    SplitMix64 rng{options.seed ^ 0x1111111111111111ULL};
    int good = 0;
    for (int i = 0; i < options.random_param_sets; ++i) {
        ProtocolParams params;
        params.w = uniform(rng, 0.0, 5.0);
        params.f = params.w + uniform(rng, 0.001, 5.0);
        params.s_A = uniform(rng, 0.01, 10.0);
        params.s_V = uniform(rng, 0.01, 10.0);
        params.z = uniform(rng, 0.01, 100.0);
        auto bi = backward_induction(build_game1(params));
        const auto* root = bi.profile.find(game1::kRoot);
        const auto* after_honest = bi.profile.find(game1::kAfterHonest);
        const auto* after_dishonest = bi.profile.find(game1::kAfterDishonest);
        bool ok = root && is_one_hot(*root, 0) &&                // Honest
                  after_honest && is_one_hot(*after_honest, 1) &&  // No
                  after_dishonest && is_one_hot(*after_dishonest, 0) &&
                  bi.payoffs[0] == params.f - params.w && bi.payoffs[1] == 0.0 &&
                  bi.tied_sets.empty();
        if (ok) ++good;
    }
    result.pass = good == options.random_param_sets;
    result.detail = std::to_string(good) + "/" +
                    std::to_string(options.random_param_sets) +
                    " random parameter sets reach the honest pure equilibrium";
    return result;
}

CheckResult check_tree_vs_closed_form(const VerifyOptions& options) {
    CheckResult result{"tree-closed-form-consistency", true, ""};
    SplitMix64 rng{options.seed ^ 0x2222222222222222ULL};
    double worst = 0.0;
    for (int i = 0; i < options.consistency_draws; ++i) {
        ProtocolParams params;
        params.s_A = uniform(rng, 0.05, 10.0);
        params.s_V = uniform(rng, 0.05, 10.0);
        params.x = uniform(rng, 0.0, 2.0);
        params.z = uniform(rng, 0.05, 50.0);
        MixPoint mix{uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0),
                     uniform(rng, 0.0, 1.0)};
        GameTree tree = build_game2(params);
        if (options.inject_payoff_fault != 0.0)
            tree.nodes[10].payoffs[0] += options.inject_payoff_fault;
        auto eu = expected_utilities(tree, game2_profile(mix));
        double da = std::fabs(eu[0] - aggregator_utility(params, mix));
        double dv = std::fabs(eu[1] - validator_utility(params, mix));
        worst = std::max({worst, da, dv});
    }
    result.pass = worst <= 1e-9;
    result.detail = "max |tree - closed form| = " + full_precision(worst) +
                    " over " + std::to_string(options.consistency_draws) +
                    " random draws";
    return result;
}

CheckResult check_combined_h(const ProtocolParams& params) {
    CheckResult result{"combined-h-cross-check", true, ""};
    LowerBounds bounds = viability_b_lower(params);
    double lo = std::max(bounds.from_g,
                         bounds.h_always_satisfied ? 0.0 : bounds.from_h_window);
    int evaluated = 0;
    double worst_gap = 0.0;
    bool all_agree = true;
    const int kPoints = 60;
    for (int i = 0; i < kPoints; ++i) {
        double t = (i + 1.0) / (kPoints + 1.0);
        double b = lo + t * (1.0 - lo);
        BoundedValue g = indifference_g(params, b);
        BoundedValue composed = indifference_h(params, b, g.value);
        BoundedValue combined = combined_h(params, b);
        if (!g.viable || !composed.viable || !combined.viable) continue;
        ++evaluated;
        worst_gap = std::max(worst_gap, std::fabs(composed.value - combined.value));
        all_agree = all_agree && numeric_cross_check(params, b).agree;
    }
    result.pass = evaluated > 0 && worst_gap <= 1e-9 && all_agree;
    result.detail = std::to_string(evaluated) + "/" + std::to_string(kPoints) +
                    " grid points viable; max composition gap " +
                    full_precision(worst_gap) +
                    (all_agree ? "; bisection agrees" : "; bisection DISAGREES");
    return result;
}

CheckResult check_threshold_flip(const ProtocolParams& params) {
    CheckResult result{"random-check-threshold-flip", false, ""};
    double p_star = random_check_threshold(params);
    int last_positive = -1, first_negative = -1;
    int transitions = 0;
    double prev = 0.0;
    const int kPoints = 100;
    for (int i = 0; i < kPoints; ++i) {
        double p = (i + 0.5) / kPoints;
        ProtocolParams with_p = params;
        with_p.p = p;
        auto eu = expected_utilities(build_game3(with_p), game3_profile(0.0));
        double closed = (1.0 - p) * params.z - p * params.s_A;
        if (std::fabs(eu[0] - closed) > 1e-9) {
            result.detail = "tree and closed form disagree at p = " + full_precision(p);
            return result;
        }
        if (eu[0] > 0.0) last_positive = i;
        if (eu[0] < 0.0 && first_negative < 0) first_negative = i;
        if (i > 0 && (eu[0] > 0.0) != (prev > 0.0)) ++transitions;
        prev = eu[0];
    }
    double step = 1.0 / kPoints;
    if (last_positive < 0 || first_negative < 0) {
        // The flip sits outside the grid; the threshold must as well.
        bool outside = (last_positive < 0 && p_star <= 0.5 * step + 1e-12) ||
                       (first_negative < 0 && p_star >= 1.0 - 0.5 * step - 1e-12);
        result.pass = outside;
        result.detail = "sign constant on the grid; threshold " +
                        full_precision(p_star) +
                        (outside ? " lies off-grid as expected" : " should be interior");
        return result;
    }
    if (transitions != 1 || first_negative != last_positive + 1) {
        result.detail = "dishonest payoff does not flip sign exactly once";
        return result;
    }
    double flip_lo = (last_positive + 0.5) * step;
    double flip_hi = (first_negative + 0.5) * step;
    result.pass = p_star >= flip_lo - 1e-12 && p_star <= flip_hi + 1e-12;
    result.detail = "sign flip bracket [" + full_precision(flip_lo) + ", " +
                    full_precision(flip_hi) + "] vs threshold " +
                    full_precision(p_star);
    return result;
}

CheckResult check_b_bound_flip(const ProtocolParams& params) {
    CheckResult result{"g-viability-bound-flip", false, ""};
    double bound = viability_b_lower(params).from_g;
    const int kPoints = 1000;
    int first_viable = -1;
    int flips = 0;
    bool prev = false;
    for (int i = 0; i < kPoints; ++i) {
        double b = (i + 0.5) / kPoints;
        bool viable = indifference_g(params, b).viable;
        if (viable && first_viable < 0) first_viable = i;
        if (i > 0 && viable != prev) ++flips;
        prev = viable;
    }
    if (first_viable < 0) {
        result.detail = "no viable b found on the grid";
        return result;
    }
    double step = 1.0 / kPoints;
    double flip_at = (first_viable + 0.5) * step;
    result.pass = flips <= 1 && std::fabs(flip_at - bound) <= step;
    result.detail = "viability turns on at b = " + full_precision(flip_at) +
                    " vs bound " + full_precision(bound);
    return result;
}

CheckResult check_easter_dominance(const VerifyOptions& options) {
    CheckResult result{"search-dominance-with-bonus", true, ""};
    SplitMix64 rng{options.seed ^ 0x3333333333333333ULL};
    double worst_margin = 0.0;
    double worst_route_gap = 0.0;
    for (int i = 0; i < options.consistency_draws; ++i) {
        ProtocolParams params;
        params.s_A = uniform(rng, 0.05, 10.0);
        params.s_V = uniform(rng, 0.05, 10.0);
        params.x = uniform(rng, 0.0, 2.0);
        params.z = uniform(rng, 0.05, 50.0);
        params.y = params.x;
        double g = uniform(rng, 0.0, 1.0);
        double h = uniform(rng, 0.0, 1.0);

        double search_closed =
            validator_utility_formula(params.s_A, params.s_V, params.x, 0.0, g, h) +
            params.y;
        double nosearch_closed =
            validator_utility_formula(params.s_A, params.s_V, params.x, 1.0, g, h);

        GameTree tree = build_game2_easter(params);
        double search_tree =
            expected_utilities(tree, game2_profile({0.0, g, h}))[1];
        double nosearch_tree =
            expected_utilities(tree, game2_profile({1.0, g, h}))[1];

        worst_route_gap = std::max({worst_route_gap,
                                    std::fabs(search_tree - search_closed),
                                    std::fabs(nosearch_tree - nosearch_closed)});
        worst_margin = std::min(worst_margin, search_closed - nosearch_closed);
    }

    // Equality case: a blind always-challenge validator against an always
    // dishonest aggregator earns the same half stake either way.
    ProtocolParams eq;
    eq.s_A = eq.s_V = 1.0;
    eq.x = 1.0 / 24.0;
    eq.z = 24.0;
    eq.y = eq.x;
    double eq_search =
        validator_utility_formula(eq.s_A, eq.s_V, eq.x, 0.0, 1.0, 0.0) + eq.y;
    double eq_nosearch =
        validator_utility_formula(eq.s_A, eq.s_V, eq.x, 1.0, 1.0, 0.0);
    bool equality = std::fabs(eq_search - 0.5) <= 1e-15 &&
                    std::fabs(eq_nosearch - 0.5) <= 1e-15;

    result.pass = worst_margin >= -1e-12 && worst_route_gap <= 1e-9 && equality;
    result.detail = "min(search - nosearch) = " + full_precision(worst_margin) +
                    "; tree/closed-form gap " + full_precision(worst_route_gap) +
                    "; equality case holds at g=1, h=0";
    return result;
}

CheckResult check_regret_audit(const ProtocolParams& params,
                               const VerifyOptions& options) {
    CheckResult result{"indifference-point-regret-audit", false, ""};
    EquilibriumPoint pt = solve_point(params, options.b);
    if (!pt.viable) {
        result.detail = "point not viable: " + pt.note;
        return result;
    }
    result.pass = pt.residual_A <= 1e-9 && pt.residual_V <= 1e-9 &&
                  pt.regret_A <= 1e-12;
    std::ostringstream detail;
    detail << "residuals (" << full_precision(pt.residual_A) << ", "
           << full_precision(pt.residual_V) << "), regret_A "
           << full_precision(pt.regret_A) << ", regret_V "
           << full_precision(pt.regret_V);

    bool reference_scenario =
        std::fabs(params.s_A - 1.0) <= 1e-12 && std::fabs(params.s_V - 1.0) <= 1e-12 &&
        std::fabs(params.x - 1.0 / 24.0) <= 1e-12 &&
        std::fabs(params.z - 24.0) <= 1e-12 && std::fabs(options.b - 0.2) <= 1e-12;
    if (reference_scenario) {
        auto br = best_response(build_game2(params), game2_profile(pt.mix), "V");
        bool value_ok = std::fabs(br.value - 21.0 / 192.0) <= 1e-12;
        result.pass = result.pass && value_ok;
        detail << "; V best-response value " << full_precision(br.value)
               << (value_ok ? " matches 21/192" : " should be 21/192");
    }
    result.detail = detail.str();
    return result;
}

}  // namespace

std::vector<CheckResult> run_verification(const ProtocolParams& params,
                                          const VerifyOptions& options) {
    params.validate();
    std::vector<CheckResult> results;
    results.push_back(check_backward_induction(options));
    results.push_back(check_tree_vs_closed_form(options));
    results.push_back(check_combined_h(params));
    results.push_back(check_threshold_flip(params));
    results.push_back(check_b_bound_flip(params));
    results.push_back(check_easter_dominance(options));
    results.push_back(check_regret_audit(params, options));
    return results;
}

}  // namespace rollup
