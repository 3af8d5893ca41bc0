#pragma once

#include "rollup/common.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rollup {

// Protocol-level constants of the staking game. All amounts are in the same
// currency unit; f is the transaction fee, w the aggregation cost, s_A and
// s_V the aggregator and validator stakes, x the cost of a validation run,
// z the reward for a successful fraud proof, y the whistleblower bonus.
struct ProtocolParams {
    double f = 0.0;
    double w = 0.0;
    double s_A = 0.0;
    double s_V = 0.0;
    double x = 0.0;
    double z = 0.0;
    double y = 0.0;
    std::optional<double> u_T;  // transactor's value for inclusion
    std::optional<double> p;    // exogenous check probability

    // Nonnegative and finite; u_T and p (when present) likewise, p in [0,1].
    void validate() const;
};

struct OrdinalReport {
    bool ordered = true;        // x < s_V <= s_A < z
    bool z_dominant = true;     // z >= multiplier * s_A
    double z_over_s_A = 0.0;    // how strongly the attack value dominates
    std::vector<std::string> warnings;
};

// The analysis assumes slashing dwarfs operating costs. Violations are
// legal inputs, so this only warns.
OrdinalReport ordinal_check(const ProtocolParams& params, double multiplier = 10.0);

// A point in the behavior space: b the validator's no-search rate, g the
// aggregator's honesty rate, h the committed-honesty rate.
struct MixPoint {
    double b = 0.0;
    double g = 0.0;
    double h = 0.0;

    void validate() const;  // each in [0,1]
};

// key=value lines ('#' comments, fractions allowed) or a JSON object.
// Field names: f, w, s_A, s_V, x, z, y, u_T, p. Unknown keys are an error.
ProtocolParams load_params(const std::string& path);

}  // namespace rollup
