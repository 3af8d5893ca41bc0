#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rollup {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed inputs: bad tree structure, bad distributions, bad parameters.
struct ValidationError : Error {
    using Error::Error;
};

// A strategy profile is missing the distribution for some information set.
struct CoverageError : Error {
    using Error::Error;
};

// Backward induction was asked to run on a tree with a non-singleton
// information set.
struct PerfectInformationError : Error {
    using Error::Error;
};

// 17 significant digits; parsing the result recovers the exact double.
std::string full_precision(double v);

// Accepts plain decimals ("0.25", "1e-3") and fractions ("1/24").
double parse_number(const std::string& text);

// "lo:hi:step" -> {lo, lo+step, ..., hi}. Values never exceed hi.
std::vector<double> parse_grid(const std::string& spec);

}  // namespace rollup
