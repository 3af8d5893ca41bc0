// Acceptance gate for the whole library: ten end-to-end criteria, one
// pass/fail line each. Exits with the number of failed criteria.

#include <rollup/engine.hpp>
#include <rollup/equilibria.hpp>
#include <rollup/games.hpp>
#include <rollup/montecarlo.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace rollup;

namespace {

ProtocolParams reference_params() {
    ProtocolParams p;
    p.f = 1.0;
    p.w = 0.5;
    p.s_A = 1.0;
    p.s_V = 1.0;
    p.x = 1.0 / 24.0;
    p.z = 24.0;
    return p;
}

MixPoint reference_mix() { return {0.2, 0.8, 67.0 / 96.0}; }

struct Outcome {
    bool pass = false;
    std::string detail;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    auto delta = std::chrono::steady_clock::now() - start;
    return std::chrono::duration<double, std::milli>(delta).count();
}

// 1. Backward induction lands on (Honest; No | honest, Challenge | dishonest)
//    for 100 random parameter sets, in under a second.
Outcome criterion_backward_induction() {
    auto start = std::chrono::steady_clock::now();
    SplitMix64 rng{7001};
    for (int i = 0; i < 100; ++i) {
        ProtocolParams p;
        p.w = rng.next_unit() * 5.0;
        p.f = p.w + 0.001 + rng.next_unit() * 5.0;
        p.s_A = 0.01 + rng.next_unit() * 10.0;
        p.s_V = 0.01 + rng.next_unit() * 10.0;
        p.x = rng.next_unit();
        p.z = 0.01 + rng.next_unit() * 100.0;
        auto res = backward_induction(build_game1(p));
        auto picked = [&](const char* label, const std::vector<double>& want) {
            const std::vector<double>* dist = res.profile.find(label);
            return dist != nullptr && *dist == want;
        };
        bool ok = res.tied_sets.empty() && picked(game1::kRoot, {1.0, 0.0}) &&
                  picked(game1::kAfterHonest, {0.0, 1.0}) &&
                  picked(game1::kAfterDishonest, {1.0, 0.0}) &&
                  res.payoffs == std::vector<double>{p.f - p.w, 0.0};
        if (!ok) return {false, "draw " + std::to_string(i) + " broke the pattern"};
    }
    double ms = elapsed_ms(start);
    if (ms >= 1000.0) return {false, "took " + std::to_string(ms) + " ms"};
    std::ostringstream detail;
    detail << "100/100 draws in " << ms << " ms";
    return {true, detail.str()};
}

// 2. The reference point solves to g = 4/5 and h = 67/96 exactly in rational
//    arithmetic, and to the same values and tiny residuals in floating point.
Outcome criterion_reference_point() {
    ExactPoint exact = solve_point_exact(Rational(1), Rational(1), Rational(1, 24),
                                         Rational(24), Rational(1, 5));
    if (!(exact.viable && exact.g == Rational(4, 5) && exact.h == Rational(67, 96) &&
          exact.residual_A == 0 && exact.residual_V == 0))
        return {false, "exact arithmetic missed the rational point"};

    EquilibriumPoint pt = solve_point(reference_params(), 0.2);
    if (!pt.viable) return {false, "float point not viable"};
    if (std::abs(pt.mix.g - 0.8) > 1e-12) return {false, "g off the closed form"};
    if (std::abs(pt.mix.h - 67.0 / 96.0) > 1e-12) return {false, "h off the closed form"};
    if (!(pt.residual_A <= 1e-12 && pt.residual_V <= 1e-12))
        return {false, "residuals above 1e-12"};
    std::ostringstream detail;
    detail << "residuals " << pt.residual_A << ", " << pt.residual_V;
    return {true, detail.str()};
}

// 3. Tree evaluation and the closed forms agree to 1e-9 on 1000 random
//    (parameters, mix) draws, in under five seconds.
Outcome criterion_tree_consistency() {
    auto start = std::chrono::steady_clock::now();
    SplitMix64 rng{7003};
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        ProtocolParams p;
        p.f = 1.0;
        p.w = 0.5;
        p.s_A = 0.01 + rng.next_unit() * 10.0;
        p.s_V = 0.01 + rng.next_unit() * 10.0;
        p.x = rng.next_unit();
        p.z = 0.01 + rng.next_unit() * 100.0;
        MixPoint m{rng.next_unit(), rng.next_unit(), rng.next_unit()};
        auto eu = expected_utilities(build_game2(p), game2_profile(m));
        worst = std::max(worst, std::abs(eu[0] - aggregator_utility(p, m)));
        worst = std::max(worst, std::abs(eu[1] - validator_utility(p, m)));
    }
    double ms = elapsed_ms(start);
    if (worst > 1e-9) return {false, "worst gap " + std::to_string(worst)};
    if (ms >= 5000.0) return {false, "took " + std::to_string(ms) + " ms"};
    std::ostringstream detail;
    detail << "worst gap " << worst << " in " << ms << " ms";
    return {true, detail.str()};
}

// 4. The one-shot h formula, the two-step composition, and plain bisection
//    agree to 1e-9 across a 1000-point grid of viable rates.
Outcome criterion_h_routes_agree() {
    ProtocolParams p = reference_params();
    double lo = viability_b_lower(p).from_g;
    double worst_combined = 0.0;
    double worst_numeric = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double b = lo + (i + 0.5) / 1000.0 * (1.0 - lo);
        auto g = indifference_g(p, b);
        if (!g.viable) return {false, "grid point b=" + std::to_string(b) + " not viable"};
        auto composed = indifference_h(p, b, g.value);
        auto direct = combined_h(p, b);
        if (!composed.viable || !direct.viable)
            return {false, "h left (0,1) at b=" + std::to_string(b)};
        worst_combined = std::max(worst_combined,
                                  std::abs(direct.value - composed.value));
        CrossCheck check = numeric_cross_check(p, b, 1e-9);
        if (!check.agree) return {false, "bisection disagreed at b=" + std::to_string(b)};
        worst_numeric = std::max(worst_numeric,
                                 std::abs(check.h_numeric - direct.value));
    }
    if (worst_combined > 1e-9)
        return {false, "combined vs composed gap " + std::to_string(worst_combined)};
    if (worst_numeric > 1e-9)
        return {false, "bisection gap " + std::to_string(worst_numeric)};
    std::ostringstream detail;
    detail << "1000 points, gaps " << worst_combined << " / " << worst_numeric;
    return {true, detail.str()};
}

// 5. An interior g exists exactly when b clears the stake ratio, located on a
//    1e-4 grid.
Outcome criterion_g_viability_flip() {
    ProtocolParams p = reference_params();
    const double bound = p.s_A / (p.s_A + p.z);
    const double step = 1e-4;
    double first_viable = -1.0;
    for (int i = 0; i < 10000; ++i) {
        double b = (i + 0.5) * step;
        auto g = indifference_g(p, b);
        bool expected = b > bound;
        if (std::abs(b - bound) > step && g.viable != expected)
            return {false, "viability wrong at b=" + std::to_string(b)};
        if (g.viable && first_viable < 0.0) first_viable = b;
        if (g.viable && !(g.value > 0.0 && g.value < 1.0))
            return {false, "viable g left (0,1) at b=" + std::to_string(b)};
    }
    if (first_viable < 0.0) return {false, "no viable b found"};
    if (std::abs(first_viable - bound) > step + 1e-12)
        return {false, "flip at " + std::to_string(first_viable)};
    std::ostringstream detail;
    detail << "flip at b = " << first_viable << ", bound " << bound;
    return {true, detail.str()};
}

// 6. Under random checking, the dishonesty advantage changes sign exactly
//    once on a 100-point p grid, inside the bracket holding z/(z+s_A) = 0.96.
Outcome criterion_random_check_flip() {
    ProtocolParams p = reference_params();
    const double p_star = random_check_threshold(p);
    int flips = 0;
    double last_positive = -1.0, first_negative = -1.0;
    double prev = 0.0;
    for (int i = 0; i < 100; ++i) {
        double check_prob = (i + 0.5) / 100.0;
        ProtocolParams q = p;
        q.p = check_prob;
        auto eu = expected_utilities(build_game3(q), game3_profile(0.0));
        double closed = (1.0 - check_prob) * p.z - check_prob * p.s_A;
        if (std::abs(eu[0] - closed) > 1e-9)
            return {false, "tree and closed form split at p=" + std::to_string(check_prob)};
        if (i > 0 && (prev > 0.0) != (eu[0] > 0.0)) {
            ++flips;
            last_positive = (i - 0.5) / 100.0;
            first_negative = check_prob;
        }
        prev = eu[0];
    }
    if (flips != 1) return {false, std::to_string(flips) + " sign changes"};
    if (!(last_positive < p_star && p_star < first_negative))
        return {false, "bracket misses the threshold"};
    std::ostringstream detail;
    detail << "sign change in (" << last_positive << ", " << first_negative
           << ") around " << p_star;
    return {true, detail.str()};
}

// 7. With the bonus set to the search cost, searching weakly dominates not
//    searching for 1000 random draws, with equality at g = 1, h = 0.
Outcome criterion_search_dominance() {
    SplitMix64 rng{7007};
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        ProtocolParams p;
        p.f = 1.0;
        p.w = 0.5;
        p.s_A = 0.01 + rng.next_unit() * 10.0;
        p.s_V = 0.01 + rng.next_unit() * 10.0;
        p.x = rng.next_unit();
        p.z = 0.01 + rng.next_unit() * 100.0;
        p.y = p.x;
        double g = rng.next_unit();
        double h = rng.next_unit();
        GameTree tree = build_game2_easter(p);
        double search = expected_utilities(tree, game2_profile({0.0, g, h}))[1];
        double blind = expected_utilities(tree, game2_profile({1.0, g, h}))[1];
        // Same margin from the closed forms; the two routes must agree.
        double closed_margin = (1.0 - h) * 0.5 * p.s_A * (1.0 - g) + g * h * p.s_V;
        if (std::abs((search - blind) - closed_margin) > 1e-9)
            return {false, "margin routes split on draw " + std::to_string(i)};
        worst = std::min(worst, search - blind);
        if (search - blind < -1e-12)
            return {false, "dominance failed on draw " + std::to_string(i)};
    }
    ProtocolParams p = reference_params();
    p.y = p.x;
    GameTree tree = build_game2_easter(p);
    double search = expected_utilities(tree, game2_profile({0.0, 1.0, 0.0}))[1];
    double blind = expected_utilities(tree, game2_profile({1.0, 1.0, 0.0}))[1];
    if (std::abs(search - blind) > 1e-15 || std::abs(search - 0.5) > 1e-15)
        return {false, "equality case failed at g=1, h=0"};
    std::ostringstream detail;
    detail << "worst margin " << worst << ", equality tied at 0.5";
    return {true, detail.str()};
}

// 8. One million seeded rounds: per-player means within four standard errors
//    of the closed forms, leaf frequencies within four sigma of the path
//    probabilities, bit-identical on rerun, under a minute.
Outcome criterion_monte_carlo() {
    auto start = std::chrono::steady_clock::now();
    ProtocolParams p = reference_params();
    MixPoint m = reference_mix();
    const std::uint64_t rounds = 1'000'000;
    SimulationReport report = simulate_game2(p, m, rounds, 7);

    ConvergenceCheck check = convergence_check(
        report, {aggregator_utility(p, m), validator_utility(p, m)});
    if (!check.all_pass) return {false, "means strayed past four standard errors"};

    const double b = m.b, g = m.g, h = m.h;
    const double path[8] = {b * h * g,       b * h * (1 - g),
                            b * (1 - h) * g, b * (1 - h) * (1 - g),
                            0.0,             (1 - b) * h,
                            (1 - b) * (1 - h), 0.0};
    const double n = static_cast<double>(rounds);
    for (int s = 0; s < 8; ++s) {
        double freq = static_cast<double>(report.leaf_counts[s]) / n;
        if (path[s] == 0.0) {
            if (report.leaf_counts[s] != 0)
                return {false, "impossible leaf " + std::to_string(s) + " was hit"};
            continue;
        }
        double sigma = std::sqrt(path[s] * (1.0 - path[s]) / n);
        if (std::abs(freq - path[s]) > 4.0 * sigma)
            return {false, "leaf " + std::to_string(s) + " frequency off"};
    }

    SimulationReport rerun = simulate_game2(p, m, rounds, 7);
    if (!(rerun == report && report_to_json(rerun) == report_to_json(report)))
        return {false, "rerun was not bit-identical"};

    double ms = elapsed_ms(start);
    if (ms >= 60000.0) return {false, "took " + std::to_string(ms) + " ms"};
    std::ostringstream detail;
    detail << rounds << " rounds twice in " << ms << " ms, all leaves in band";
    return {true, detail.str()};
}

// 9. At the solved point the aggregator has no profitable deviation and the
//    validator's best response is worth exactly 21/192.
Outcome criterion_regret_audit() {
    ProtocolParams p = reference_params();
    EquilibriumPoint pt = solve_point(p, 0.2);
    if (!pt.viable) return {false, "point not viable"};
    if (!(pt.regret_A <= 1e-12)) return {false, "aggregator regret above 1e-12"};
    auto br = best_response(build_game2(p), game2_profile(pt.mix), "V");
    if (std::abs(br.value - 21.0 / 192.0) > 1e-12)
        return {false, "validator best response missed 21/192"};
    std::ostringstream detail;
    detail << "regret_A " << pt.regret_A << ", BR value " << br.value;
    return {true, detail.str()};
}

// 10. Transacting starts to pay exactly at the closed-form utility bound,
//     located on a 1e-5 grid.
Outcome criterion_transactor_flip() {
    ProtocolParams p = reference_params();
    MixPoint m = reference_mix();
    double bound = transactor_min_utility(p, m).value;
    const double step = 1e-5;
    int flips = 0;
    double last_negative = -1.0, first_positive = -1.0;
    double prev = 0.0;
    for (int i = 0; i < 5000; ++i) {
        double u = 1.0 + (i + 0.5) * step;
        ProtocolParams q = p;
        q.u_T = u;
        double utility = transactor_utility(q, m);
        if (i > 0 && (prev > 0.0) != (utility > 0.0)) {
            ++flips;
            last_negative = 1.0 + (i - 0.5) * step;
            first_positive = u;
        }
        prev = utility;
    }
    if (flips != 1) return {false, std::to_string(flips) + " sign changes"};
    if (!(last_negative < bound && bound < first_positive))
        return {false, "bracket misses the bound"};
    if (first_positive - last_negative > step + 1e-12)
        return {false, "bracket wider than the grid step"};
    std::ostringstream detail;
    detail << "participation flips in (" << last_negative << ", " << first_positive
           << ") around " << bound;
    return {true, detail.str()};
}

}  // namespace

int main() {
    struct Criterion {
        const char* label;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"backward induction finds the honest equilibrium on 100 random draws",
         criterion_backward_induction},
        {"the reference point solves exactly and in floating point",
         criterion_reference_point},
        {"tree evaluation matches the closed forms on 1000 random draws",
         criterion_tree_consistency},
        {"one-shot h, two-step h, and bisection agree on a 1000-point grid",
         criterion_h_routes_agree},
        {"an interior g exists exactly above the stake ratio bound",
         criterion_g_viability_flip},
        {"the random-check advantage flips sign at the haircut threshold",
         criterion_random_check_flip},
        {"with bonus = search cost, searching weakly dominates",
         criterion_search_dominance},
        {"one million seeded rounds converge and rerun bit-identically",
         criterion_monte_carlo},
        {"the solved point passes the regret audit with BR value 21/192",
         criterion_regret_audit},
        {"transactor participation flips at the closed-form bound",
         criterion_transactor_flip},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        if (!outcome.pass) ++failed;
        std::printf("%s  %2zu. %s  (%s)\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].label, outcome.detail.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed,
                criteria.size());
    return failed;
}
