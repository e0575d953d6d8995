#pragma once

#include <span>
#include <vector>

#include "banditlb/policies.hpp"

namespace banditlb::info {

// Finite probability law; carrier for the two-distribution inequalities.
struct DiscreteLaw {
    std::vector<double> probabilities;

    std::size_t size() const { return probabilities.size(); }
    void validate() const; // nonnegative entries summing to 1 within 1e-12
};

// Bernoulli KL with the conventions 0 log 0 = 0/0 = 0 and a/0 = +inf (a > 0).
double kl_bernoulli(double p, double q);

// Bernoulli chi-squared divergence (p-q)^2 / (q(1-q)); +inf at q in {0,1}
// unless p == q.
double chi2_bernoulli(double p, double q);

// Finite-support KL with the same conventions.
double kl_discrete(const DiscreteLaw& p, const DiscreteLaw& q);

// Exact KL between two equal-variance Gaussians a shift epsilon apart; also an
// upper bound on the KL of their clipped images.
double kl_gaussian_shift(double epsilon, double sigma2);

// Lower bound on P(A) + Q(A^c) for every event A: (1/2) exp(-KL(P,Q)).
double bretagnolle_huber_bound(double kl);

// Upper bound on total variation: sqrt(KL/2).
double pinsker_tv_bound(double kl);

// Dot product of expected pull counts with per-arm marginal divergences
// (the chain-rule decomposition's right-hand side). Terms with a zero count
// contribute zero even when the divergence is infinite.
double chain_rule_rhs(std::span<const double> expected_counts,
                      std::span<const double> per_arm_kl);

struct OracleResult {
    double joint_kl;          // exact KL between the two history-action laws
    double chain_rule_value;  // counts-weighted sum of per-arm Bernoulli KLs
    long paths_enumerated;
};

// Exhaustively enumerates every (history, action) path up to the given round
// for a deterministic policy playing against per-arm Bernoulli losses, and
// computes both sides of the chain-rule identity exactly. Limited to small
// instances (arms <= 3, round <= 4); larger requests raise CapacityError.
OracleResult exact_history_kl_oracle(const policies::PolicyConfig& policy,
                                     std::span<const double> law1,
                                     std::span<const double> law2, int round);

} // namespace banditlb::info
