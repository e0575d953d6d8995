#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "banditlb/core.hpp"
#include "banditlb/envs.hpp"
#include "banditlb/policies.hpp"
#include "banditlb/rng.hpp"

namespace banditlb::runner {

inline constexpr std::uint64_t kDefaultMasterSeed = 123456789ull;
inline constexpr long kDefaultRoundBudget = 4'000'000'000L;

// Uniform mixture over the K target environments of a Bernoulli family.
struct MixtureSpec {
    envs::BernoulliFamilySpec base; // target arm of the base is ignored
};

using EnvSpec =
    std::variant<envs::ClippedGaussianSpec, envs::BernoulliFamilySpec, MixtureSpec>;

std::string env_family(const EnvSpec& env);
// Canonical parameter string (stable key order, 17-digit reals, no target).
std::string env_params(const EnvSpec& env);
// "1".."K" for targeted specs, "0" for the null measure, "mix" for mixtures.
std::string env_target_label(const EnvSpec& env);
int env_arms(const EnvSpec& env);
long env_rounds(const EnvSpec& env);
std::optional<double> env_delta(const EnvSpec& env);
LossMatrix sample_env(const EnvSpec& env, RngStream& stream);
// Threshold for tail-frequency reporting: the high-probability lower-bound
// value for clipped-Gaussian environments, the expectation lower bound for
// Bernoulli families.
double default_tail_threshold(const EnvSpec& env);

struct Cell {
    EnvSpec env;
    policies::PolicyConfig policy;

    std::string canonical() const;
    std::uint64_t id() const; // stable hash of canonical()
};

struct ExperimentPlan {
    std::vector<Cell> cells;
    int replications = 1;
    std::uint64_t master_seed = kDefaultMasterSeed;
    int workers = 0; // 0 = hardware concurrency
    std::optional<double> tail_threshold;
    std::optional<double> ball_alpha; // count sampled matrices outside the ball
    BallKind ball_kind = BallKind::small_loss;
    long max_total_rounds = kDefaultRoundBudget;

    void validate() const;
};

struct CellStats {
    std::string env_family;
    std::string env_params;
    std::string target_label;
    std::string policy;
    int arms = 0;
    long rounds = 0;
    int replications = 0;
    std::uint64_t cell_id = 0;
    double mean_regret = 0.0;
    double std_error = 0.0;
    double q50 = 0.0;
    double q90 = 0.0;
    double q_delta = 0.0; // (1-delta) quantile when the env carries a delta
    double tail_threshold = 0.0;
    double tail_frequency = 0.0;
    long ball_failures = -1; // -1 when ball counting was not requested
};

struct RegretStats {
    std::uint64_t master_seed = 0;
    std::vector<CellStats> cells;
};

// Runs every cell for the configured number of replications. Stream for
// (cell, replication) is derived from (master_seed, cell id, replication), so
// results do not depend on worker count or execution order.
RegretStats run_plan(const ExperimentPlan& plan);

// Lower empirical quantile: the order statistic at ceil(level * n).
double empirical_quantile(std::span<const double> sorted_values, double level);

struct WorstCaseCell {
    std::string env_family;
    std::string env_params;
    std::string policy;
    long rounds = 0;
    int family_size = 0;
    double worst_mean = 0.0;
    std::string worst_mean_target;
    double worst_tail_frequency = 0.0;
    std::string worst_tail_target;
};

// Per (environment family parameters, policy, horizon): the maximum statistic
// over the K target arms. Every family must be complete (targets 1..K);
// otherwise a StructuralError is raised.
std::vector<WorstCaseCell> worst_case_over_targets(const RegretStats& stats);

struct BallViolationStats {
    long failures = 0;
    int replications = 0;
    double frequency = 0.0;
    double per_sample_bound = 0.0; // 1/(32T)
};

// Frequency of ball-membership failure over freshly sampled matrices:
// best cumulative loss above alpha*T (small_loss) or quadratic variation
// above alpha*T*K (small_variation).
BallViolationStats ball_violation_rate(const envs::BernoulliFamilySpec& spec, double alpha,
                                       BallKind kind, int replications, RngStream& stream);

struct PowerFit {
    double exponent = 0.0;
    double intercept = 0.0;    // of log(mean) against log(T)
    double residual_rms = 0.0; // in log space
};

// Least-squares fit of log(mean) against log(rounds). Requires at least four
// strictly increasing grid points with positive means.
PowerFit fit_power_law(std::span<const long> rounds, std::span<const double> means);

struct HoeffdingCheckStats {
    long hits = 0; // replications with sum of in-window indicators <= 3T/4
    int replications = 0;
    double frequency = 0.0;
    double bound = 0.0; // exp(-T/32)
};

// Empirical frequency of the rare event that at most 3/4 of the Gaussian
// draws land inside [2*gap, 1-2*gap]. Requires rounds >= 32 log(2/delta).
HoeffdingCheckStats hoeffding_w_check(const envs::ClippedGaussianSpec& spec, long rounds,
                                      int replications, RngStream& stream);

// Empirical estimate of the uniform mean-regret constant: the maximum over a
// horizon grid of worst-target mean regret divided by sqrt((K-1)T), measured
// on the correlated construction sweep. Used to instantiate theorem2-mode
// environments for a concrete algorithm.
double estimate_regret_constant(policies::Kind kind, std::optional<double> policy_delta,
                                int arms, double env_delta, std::span<const long> t_grid,
                                int replications, std::uint64_t master_seed, int workers);

} // namespace banditlb::runner
