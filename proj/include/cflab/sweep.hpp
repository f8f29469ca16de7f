#pragma once

// Structural sweep over all nonsquare D up to a bound: expands sqrt(D),
// checks the cycle-closing facts (last quotient 2*a0, trace identity over
// tail convergents, convergent determinant, approximation quality), and
// aggregates.  D values are independent, so the kernel has serial and
// OpenMP paths with identical output.

#include "cflab/cf.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cflab {

struct SweepOptions {
    uint64_t d_max = 10000;
    size_t convergent_checks = 10;      // verify |sqrt(D) - p_i/q_i| < 1/(q_i q_{i+1}) for i < this
    uint64_t step_budget = kDefaultStepBudget;
    bool parallel = true;
};

struct SweepFailure {
    uint64_t D;
    std::string what;
};

struct SweepResult {
    uint64_t d_max = 0;
    uint64_t nonsquare_count = 0;
    uint64_t max_period = 0;
    uint64_t max_period_at = 0;
    std::vector<SweepFailure> failures;  // empty on a clean sweep
    // Per-D period length (0 for squares), for cross-path comparison.
    std::vector<uint32_t> period_len;

    bool clean() const { return failures.empty(); }
};

SweepResult structural_sweep(const SweepOptions& opt = {});

} // namespace cflab
