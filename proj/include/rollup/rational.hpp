#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace rollup {

// Exact arithmetic for the closed-form curves. Every solved quantity is a
// ratio of polynomials in the inputs, so rational inputs give rational
// outputs with no rounding at all.
using Rational = boost::multiprecision::cpp_rational;

// Accepts "67/96", "24", "-3/7" and plain decimals ("0.25" -> 1/4).
Rational parse_rational(const std::string& text);

double to_double(const Rational& r);

}  // namespace rollup
