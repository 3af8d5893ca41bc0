#include "rollup/equilibria.hpp"
#include "rollup/common.hpp"
#include "rollup/engine.hpp"
#include "rollup/games.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rollup {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

BoundedValue indifference_g(const ProtocolParams& params, double b) {
    params.validate();
    const double s_A = params.s_A, z = params.z;
    if (b <= 0.0 || b * (s_A + z) == 0.0)
        return {kNaN, false, "g undefined: needs b > 0 and s_A + z > 0"};
    double g = indifference_g_formula(s_A, z, b);
    double bound = s_A / (s_A + z);
    if (!(b > bound) || !(g > 0.0) || !(g < 1.0)) {
        return {g, false,
                "g = " + full_precision(g) + " outside (0,1): needs b > " +
                    full_precision(bound) + " (= s_A/(s_A+z))"};
    }
    return {g, true, ""};
}

BoundedValue indifference_h(const ProtocolParams& params, double b, double g) {
    params.validate();
    const double s_A = params.s_A, s_V = params.s_V, x = params.x;
    double den = b * g * s_V + b * g * 0.5 * s_A + (1.0 - b) * 0.5 * s_A;
    if (den <= 0.0)
        return {kNaN, false, "h undefined: indifference denominator is zero"};
    double h = indifference_h_formula(s_A, s_V, x, b, g);
    if (!(h > 0.0) || !(h < 1.0))
        return {h, false, "h = " + full_precision(h) + " outside (0,1)"};
    return {h, true, ""};
}

BoundedValue combined_h(const ProtocolParams& params, double b) {
    params.validate();
    const double s_A = params.s_A, s_V = params.s_V, x = params.x, z = params.z;
    double den = 0.5 * s_A * z - s_A * s_V + (z + s_A) * s_V * b;
    if (den == 0.0)
        return {kNaN, false, "h undefined: combined denominator is zero"};
    double h = combined_h_formula(s_A, s_V, x, z, b);
    if (!(h > 0.0) || !(h < 1.0))
        return {h, false, "h = " + full_precision(h) + " outside (0,1)"};
    return {h, true, ""};
}

LowerBounds viability_b_lower(const ProtocolParams& params) {
    params.validate();
    const double s_A = params.s_A, s_V = params.s_V, x = params.x, z = params.z;
    LowerBounds bounds;
    bounds.from_g = s_A + z > 0.0 ? viability_b_from_g_formula(s_A, z) : 0.0;
    double num = s_A * s_V - s_A * x - z * x;
    double den = num + z * s_V;
    bounds.from_h_window = den != 0.0 ? num / den : kNaN;
    bounds.h_always_satisfied =
        std::isfinite(bounds.from_h_window) && bounds.from_h_window <= 0.0;
    return bounds;
}

double random_check_threshold(const ProtocolParams& params) {
    params.validate();
    if (params.z + params.s_A <= 0.0)
        throw ValidationError("threshold needs z + s_A > 0");
    return random_check_threshold_formula(params.s_A, params.z);
}

double easter_egg_min_reward(const ProtocolParams& params) {
    params.validate();
    return params.x;
}

BoundedValue transactor_min_utility(const ProtocolParams& params,
                                    const MixPoint& mix) {
    params.validate();
    mix.validate();
    if (mix.h <= 0.0)
        return {std::numeric_limits<double>::infinity(), false,
                "unbounded: a transactor facing h = 0 never participates"};
    double bound =
        params.f * (1.0 + mix.b * (1.0 - mix.g) * (1.0 - mix.h) / mix.h);
    return {bound, true, ""};
}

EquilibriumPoint solve_point(const ProtocolParams& params, double b) {
    params.validate();
    EquilibriumPoint pt;
    pt.mix.b = b;
    pt.residual_A = pt.residual_V = pt.regret_A = pt.regret_V = kNaN;

    LowerBounds bounds = viability_b_lower(params);
    pt.b_above_g_bound = b > bounds.from_g;
    pt.b_above_h_bound = bounds.h_always_satisfied || b > bounds.from_h_window;

    BoundedValue g = indifference_g(params, b);
    pt.mix.g = g.value;
    pt.g_in_range = g.viable;
    if (!g.viable) {
        pt.note = g.note;
        BoundedValue h = combined_h(params, b);
        pt.mix.h = h.value;
        pt.h_in_range = h.viable;
        return pt;
    }

    BoundedValue h = indifference_h(params, b, g.value);
    pt.mix.h = h.value;
    pt.h_in_range = h.viable;
    if (!h.viable) {
        pt.note = h.note;
        return pt;
    }

    pt.viable = true;
    pt.residual_A = std::fabs(aggregator_utility(params, pt.mix));
    pt.residual_V = std::fabs(validator_utility(params, pt.mix));
    GameTree tree = build_game2(params);
    auto regrets = regret_audit(tree, game2_profile(pt.mix));
    pt.regret_A = regrets[0].regret;
    pt.regret_V = regrets[1].regret;
    return pt;
}

ExactPoint solve_point_exact(const Rational& s_A, const Rational& s_V,
                             const Rational& x, const Rational& z,
                             const Rational& b) {
    if (b <= 0 || s_A + z <= 0)
        throw ValidationError("exact solve needs b > 0 and s_A + z > 0");
    ExactPoint pt;
    pt.g = indifference_g_formula(s_A, z, b);
    Rational half = Rational(1) / Rational(2);
    Rational den = half * s_A * z - s_A * s_V + (z + s_A) * s_V * b;
    if (den == 0)
        throw ValidationError("exact solve: combined denominator is zero");
    pt.h = combined_h_formula(s_A, s_V, x, z, b);
    pt.residual_A = abs(aggregator_utility_formula(s_A, z, b, pt.g, pt.h));
    pt.residual_V = abs(validator_utility_formula(s_A, s_V, x, b, pt.g, pt.h));
    pt.viable = pt.g > 0 && pt.g < 1 && pt.h > 0 && pt.h < 1;
    return pt;
}

std::optional<double> bisect(const std::function<double(double)>& f, double lo,
                             double hi, double tol, int max_iter) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) return std::nullopt;
    for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
        double mid = 0.5 * (lo + hi);
        double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

CrossCheck numeric_cross_check(const ProtocolParams& params, double b,
                               double tol) {
    params.validate();
    CrossCheck check;
    check.g_closed = indifference_g(params, b).value;
    check.h_closed = combined_h(params, b).value;
    check.g_numeric = check.h_numeric = kNaN;

    const double s_A = params.s_A, s_V = params.s_V, x = params.x, z = params.z;
    // At h = 0 the aggregator's utility is the full honest/dishonest gap,
    // strictly decreasing in g, so the root is the indifference g.
    auto gap = [&](double g) {
        return aggregator_utility_formula(s_A, z, b, g, 0.0);
    };
    auto g_root = bisect(gap, 1e-12, 1.0 - 1e-12);
    if (!g_root) {
        check.note = "no sign change for g in (0,1)";
        return check;
    }
    check.g_numeric = *g_root;
    auto v_util = [&](double h) {
        return validator_utility_formula(s_A, s_V, x, b, *g_root, h);
    };
    auto h_root = bisect(v_util, 1e-12, 1.0 - 1e-12);
    if (!h_root) {
        check.note = "no sign change for h in (0,1)";
        return check;
    }
    check.h_numeric = *h_root;
    check.agree = std::fabs(check.g_closed - check.g_numeric) <= tol &&
                  std::fabs(check.h_closed - check.h_numeric) <= tol;
    if (!check.agree && check.note.empty())
        check.note = "closed form and bisection disagree";
    return check;
}

std::vector<EquilibriumPoint> sweep_curve(const ProtocolParams& params,
                                          const std::vector<double>& b_grid) {
    std::vector<EquilibriumPoint> out;
    out.reserve(b_grid.size());
    for (double b : b_grid) out.push_back(solve_point(params, b));
    return out;
}

std::string curve_csv(const std::vector<EquilibriumPoint>& points,
                      const std::vector<double>& b_grid) {
    std::ostringstream out;
    out << "b,g,h,residual_A,residual_V,regret_A,regret_V,viable\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        const EquilibriumPoint& pt = points[i];
        double b = i < b_grid.size() ? b_grid[i] : pt.mix.b;
        out << full_precision(b) << ',' << full_precision(pt.mix.g) << ','
            << full_precision(pt.mix.h) << ',' << full_precision(pt.residual_A)
            << ',' << full_precision(pt.residual_V) << ','
            << full_precision(pt.regret_A) << ',' << full_precision(pt.regret_V)
            << ',' << (pt.viable ? 1 : 0) << '\n';
    }
    return out.str();
}

}  // namespace rollup
