#pragma once

#include "rollup/params.hpp"
#include "rollup/rational.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rollup {

// The aggregator's honesty rate that leaves a blind validator indifferent
// between challenging and not.
template <typename T>
T indifference_g_formula(T s_A, T z, T b) {
    return T(1) - s_A / (b * s_A + b * z);
}

// The committed-honesty rate that leaves the validator indifferent between
// searching and staying blind, given g.
template <typename T>
T indifference_h_formula(T s_A, T s_V, T x, T b, T g) {
    T one = T(1);
    T half = T(1) / T(2);
    T num = b * g * half * s_A + (one - b) * half * s_A - (one - b) * x;
    T den = b * g * s_V + b * g * half * s_A + (one - b) * half * s_A;
    return num / den;
}

// indifference_h with the indifference g substituted in, reduced to one
// expression in the protocol constants and b.
template <typename T>
T combined_h_formula(T s_A, T s_V, T x, T z, T b) {
    T one = T(1);
    T half = T(1) / T(2);
    T num = half * s_A * z - (one - b) * (z * x + s_A * x);
    T den = half * s_A * z - s_A * s_V + (z + s_A) * s_V * b;
    return num / den;
}

// Largest exogenous check probability at which dishonesty still pays.
template <typename T>
T random_check_threshold_formula(T s_A, T z) {
    return z / (z + s_A);
}

// No-search rate above which the interior equilibrium exists at all.
template <typename T>
T viability_b_from_g_formula(T s_A, T z) {
    return s_A / (s_A + z);
}

// No-search rate above which the combined h stays below one.
template <typename T>
T viability_b_from_h_formula(T s_A, T s_V, T x, T z) {
    T num = s_A * s_V - s_A * x - z * x;
    return num / (num + z * s_V);
}

struct BoundedValue {
    double value = 0.0;
    bool viable = false;
    std::string note;  // which bound failed, when not viable
};

BoundedValue indifference_g(const ProtocolParams& params, double b);
BoundedValue indifference_h(const ProtocolParams& params, double b, double g);
BoundedValue combined_h(const ProtocolParams& params, double b);

struct LowerBounds {
    double from_g = 0.0;         // below this, the g solution exceeds one
    double from_h_window = 0.0;  // below this, the combined h reaches one
    bool h_always_satisfied = false;  // bound is nonpositive for these params
};

LowerBounds viability_b_lower(const ProtocolParams& params);

// p* = z / (z + s_A): dishonesty beats honesty under random checking until
// the check probability passes this.
double random_check_threshold(const ProtocolParams& params);

// Smallest whistleblower bonus making Search weakly dominant.
double easter_egg_min_reward(const ProtocolParams& params);

// u_T above which transacting beats abstaining at the mix point. Unbounded
// (and flagged non-viable) when h = 0.
BoundedValue transactor_min_utility(const ProtocolParams& params, const MixPoint& mix);

// One solved point of the interior equilibrium curve, with the checks that
// make it trustworthy: residuals of both indifference conditions and the
// regret of each player against an exhaustive best response.
struct EquilibriumPoint {
    MixPoint mix;
    double residual_A = 0.0;
    double residual_V = 0.0;
    double regret_A = 0.0;
    double regret_V = 0.0;
    bool viable = false;
    bool g_in_range = false;
    bool h_in_range = false;
    bool b_above_g_bound = false;
    bool b_above_h_bound = false;
    std::string note;
};

EquilibriumPoint solve_point(const ProtocolParams& params, double b);

// The same point in exact arithmetic. Residuals here are identically zero
// by construction; the fields prove it.
struct ExactPoint {
    Rational g;
    Rational h;
    Rational residual_A;
    Rational residual_V;
    bool viable = false;
};

ExactPoint solve_point_exact(const Rational& s_A, const Rational& s_V,
                             const Rational& x, const Rational& z,
                             const Rational& b);

// Root of f on [lo, hi] by bisection; empty when f does not change sign.
std::optional<double> bisect(const std::function<double(double)>& f, double lo,
                             double hi, double tol = 1e-12, int max_iter = 200);

// Re-derives the closed forms numerically: g from the aggregator's
// indifference at fixed h, then h from the validator's at that g.
struct CrossCheck {
    double g_closed = 0.0;
    double h_closed = 0.0;
    double g_numeric = 0.0;
    double h_numeric = 0.0;
    bool agree = false;
    std::string note;
};

CrossCheck numeric_cross_check(const ProtocolParams& params, double b,
                               double tol = 1e-9);

std::vector<EquilibriumPoint> sweep_curve(const ProtocolParams& params,
                                          const std::vector<double>& b_grid);

// Columns: b,g,h,residual_A,residual_V,regret_A,regret_V,viable.
std::string curve_csv(const std::vector<EquilibriumPoint>& points,
                      const std::vector<double>& b_grid);

}  // namespace rollup
