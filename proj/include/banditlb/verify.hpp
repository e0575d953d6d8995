#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace banditlb::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;

    bool all_passed() const;
};

struct SuiteOptions {
    std::uint64_t master_seed;
    int workers = 0;
    // Overrides the Monte Carlo replication counts of the scaling suite.
    std::optional<int> replications;

    SuiteOptions();
};

// Deterministic grid checks of the two-distribution inequalities
// (kl vs chi-squared domination, the Pinsker bound on total variation, the
// exhaustive single-observation event bound).
SuiteResult run_inequalities(const SuiteOptions& options);

// Exact enumeration of the chain-rule identity for the history-action law.
SuiteResult run_oracle(const SuiteOptions& options);

// Structural invariants of the correlated clipped-Gaussian construction.
SuiteResult run_constructions(const SuiteOptions& options);

// Rare-event tails: ball-membership failures of the Bernoulli families and
// the in-window indicator sum of the Gaussian construction.
SuiteResult run_tails(const SuiteOptions& options);

// Monte Carlo witnesses of the regret lower bounds (tail frequency, worst-arm
// means, mixture expectation).
SuiteResult run_lower_bounds(const SuiteOptions& options);

// Square-root growth of mean regret across a horizon grid, plus an upper
// sanity ceiling for the exploration-robust baseline.
SuiteResult run_scaling(const SuiteOptions& options);

// Bit-identical reproduction of a full plan under a fixed master seed.
SuiteResult run_determinism(const SuiteOptions& options);

std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, const SuiteOptions& options);

} // namespace banditlb::verify
