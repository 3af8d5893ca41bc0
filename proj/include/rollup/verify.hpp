#pragma once

#include "rollup/params.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rollup {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 2024;
    int random_param_sets = 100;   // perfect-information sweep
    int consistency_draws = 1000;  // tree vs closed-form comparisons
    double inject_payoff_fault = 0.0;  // perturbs one Game 2 leaf, for testing
    double b = 0.2;                // mix used for the point checks
};

// Self-contained audit of the analysis stack: backward induction on random
// parameter draws, tree evaluation against the closed forms, the combined h
// against its numeric re-derivation, threshold sign flips, whistleblower
// dominance, and a best-response regret audit of the solved point.
std::vector<CheckResult> run_verification(const ProtocolParams& params,
                                          const VerifyOptions& options);

}  // namespace rollup
