#include "banditlb/verify.hpp"

#include <cmath>
#include <cstdio>

#include "banditlb/bounds.hpp"
#include "banditlb/csv.hpp"
#include "banditlb/envs.hpp"
#include "banditlb/errors.hpp"
#include "banditlb/info.hpp"
#include "banditlb/policies.hpp"
#include "banditlb/runner.hpp"

namespace banditlb::verify {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[200];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

void add(SuiteResult& suite, std::string name, bool passed, std::string detail) {
    suite.checks.push_back({std::move(name), passed, std::move(detail)});
}

policies::PolicyConfig make_policy(policies::Kind kind, int arms, long horizon,
                                   std::optional<double> delta = std::nullopt) {
    policies::PolicyConfig policy;
    policy.kind = kind;
    policy.arms = arms;
    policy.horizon = horizon;
    policy.delta = delta;
    return policy;
}

} // namespace

bool SuiteResult::all_passed() const {
    for (const auto& check : checks) {
        if (!check.passed) return false;
    }
    return true;
}

SuiteOptions::SuiteOptions() : master_seed(runner::kDefaultMasterSeed) {}

SuiteResult run_inequalities(const SuiteOptions& options) {
    SuiteResult suite{"inequalities", {}};
    RngStream stream = RngStream::derive(options.master_seed, fnv1a64("inequalities"), 0);

    std::vector<std::pair<double, double>> grid;
    grid.reserve(10016);
    for (int i = 0; i < 10000; ++i) grid.emplace_back(stream.next_double(), stream.next_double());
    // Boundary and degenerate pairs the random grid cannot hit exactly.
    const double edge[] = {0.0, 1.0, 0.5, 0.25};
    for (double p : edge) {
        for (double q : edge) grid.emplace_back(p, q);
    }

    long kl_chi2_violations = 0;
    long pinsker_violations = 0;
    long event_violations = 0;
    double worst_margin = 1.0;
    for (const auto& [p, q] : grid) {
        const double kl = info::kl_bernoulli(p, q);
        const double chi2 = info::chi2_bernoulli(p, q);
        if (kl > chi2) ++kl_chi2_violations;
        if (std::abs(p - q) > info::pinsker_tv_bound(kl)) ++pinsker_violations;
        const double bound = info::bretagnolle_huber_bound(kl);
        // All four events over one Bernoulli observation.
        const double events[4] = {1.0, 1.0, p + (1.0 - q), (1.0 - p) + q};
        for (double value : events) {
            if (value < bound) ++event_violations;
            worst_margin = std::min(worst_margin, value - bound);
        }
    }
    add(suite, "kl-below-chi2",
        kl_chi2_violations == 0,
        fmt("violations=%g over %g pairs", static_cast<double>(kl_chi2_violations),
            static_cast<double>(grid.size())));
    add(suite, "pinsker-total-variation",
        pinsker_violations == 0,
        fmt("violations=%g over %g pairs", static_cast<double>(pinsker_violations),
            static_cast<double>(grid.size())));
    add(suite, "event-lower-bound",
        event_violations == 0,
        fmt("violations=%g; smallest slack=%.6g", static_cast<double>(event_violations),
            worst_margin));
    return suite;
}

SuiteResult run_oracle(const SuiteOptions&) {
    SuiteResult suite{"oracle", {}};
    const auto policy = make_policy(policies::Kind::exp3, 2, 4);
    const double pair_sets[2][2][2] = {
        {{0.3, 0.5}, {0.3, 0.3}},
        {{0.5, 0.5}, {0.5, 0.2}},
    };
    double worst_gap = 0.0;
    for (int pair = 0; pair < 2; ++pair) {
        const std::vector<double> law1(pair_sets[pair][0], pair_sets[pair][0] + 2);
        const std::vector<double> law2(pair_sets[pair][1], pair_sets[pair][1] + 2);
        for (int round = 1; round <= 3; ++round) {
            const auto result = info::exact_history_kl_oracle(policy, law1, law2, round);
            const double gap = std::abs(result.joint_kl - result.chain_rule_value);
            worst_gap = std::max(worst_gap, gap);
            char name[96];
            std::snprintf(name, sizeof(name), "chain-rule-pair%d-t%d", pair + 1, round);
            add(suite, name, gap <= 1e-9,
                fmt("|joint - chain|=%.3g; joint=%.12g", gap, result.joint_kl));
            if (round == 1) {
                add(suite, std::string(name) + "-empty-history",
                    result.joint_kl == 0.0 && result.chain_rule_value == 0.0,
                    "both sides vanish before any observation");
            }
        }
    }
    {
        const std::vector<double> law{0.4, 0.7};
        const auto result = info::exact_history_kl_oracle(policy, law, law, 3);
        add(suite, "identical-laws",
            result.joint_kl == 0.0 && result.chain_rule_value == 0.0,
            "equal environments give zero divergence");
    }
    add(suite, "worst-gap", worst_gap <= 1e-9, fmt("max |joint - chain| = %.3g", worst_gap));
    return suite;
}

SuiteResult run_constructions(const SuiteOptions& options) {
    SuiteResult suite{"constructions", {}};
    const long rounds = 10000;
    const int arm_counts[] = {2, 4, 8};
    const double deltas[] = {0.05, 0.15};
    int combo = 0;
    for (int arms : arm_counts) {
        for (double delta : deltas) {
            ++combo;
            for (int target : {0, 1}) {
                const auto spec =
                    envs::ClippedGaussianSpec::theorem1(arms, rounds, delta, target);
                RngStream stream = RngStream::derive(
                    options.master_seed, fnv1a64("constructions"),
                    static_cast<std::uint64_t>(combo * 10 + target));
                const LossMatrix losses = envs::sample_clipped_gaussian(spec, stream);

                long argmin_rounds = 0;
                double max_range = 0.0;
                for (long t = 0; t < rounds; ++t) {
                    const auto row = losses.row(t);
                    double lo = row[0], hi = row[0];
                    for (double v : row) {
                        lo = std::min(lo, v);
                        hi = std::max(hi, v);
                    }
                    if (row[static_cast<std::size_t>(spec.optimal_arm())] == lo) ++argmin_rounds;
                    max_range = std::max(max_range, hi - lo);
                }
                char label[96];
                std::snprintf(label, sizeof(label), "K%d-delta%.2f-j%d", arms, delta,
                              target + 1);
                add(suite, std::string(label) + "-argmin",
                    argmin_rounds == rounds,
                    fmt("optimal arm minimizes %g of %g rounds",
                        static_cast<double>(argmin_rounds), static_cast<double>(rounds)));
                add(suite, std::string(label) + "-range",
                    max_range <= 2.0 * spec.gap + 1e-12,
                    fmt("max range=%.6g; 2*gap=%.6g", max_range, 2.0 * spec.gap));
            }
            const auto spec = envs::ClippedGaussianSpec::theorem1(arms, rounds, delta, 0);
            RngStream stream = RngStream::derive(options.master_seed,
                                                 fnv1a64("constructions-clip"),
                                                 static_cast<std::uint64_t>(combo));
            const auto clip = envs::clipping_event_stats(spec, rounds, stream);
            char label[96];
            std::snprintf(label, sizeof(label), "K%d-delta%.2f", arms, delta);
            add(suite, std::string(label) + "-clip-frequency",
                clip.complement_frequency <= 0.15,
                fmt("frequency=%.6g; bound=%.6g", clip.complement_frequency,
                    clip.complement_bound));
            add(suite, std::string(label) + "-clip-bound",
                clip.complement_bound <= 0.125,
                fmt("exp bound=%.6g vs 1/8", clip.complement_bound));
        }
    }
    return suite;
}

SuiteResult run_tails(const SuiteOptions& options) {
    SuiteResult suite{"tails", {}};
    const long rounds = 2048;
    const int arms = 2;
    const int reps = 100000;
    const double count_bound = 10.0 * reps / (32.0 * static_cast<double>(rounds));

    {
        const double alpha = bounds::first_order_alpha_floor(arms, rounds);
        bounds::BoundQuery query;
        query.kind = bounds::BoundKind::thm4_lower;
        query.arms = arms;
        query.rounds = rounds;
        query.alpha = alpha;
        const auto report = bounds::validate_hypotheses(query);
        const auto spec = envs::BernoulliFamilySpec::lemma5(arms, rounds, alpha / 2.0, 0);
        RngStream stream = RngStream::derive(options.master_seed, fnv1a64("tails-loss"), 0);
        const auto stats =
            runner::ball_violation_rate(spec, alpha, BallKind::small_loss, reps, stream);
        add(suite, "small-loss-ball-tail",
            report.ok && static_cast<double>(stats.failures) <= count_bound,
            fmt("failures=%g; allowance=%.4g; per-sample bound=%.4g",
                static_cast<double>(stats.failures), count_bound, stats.per_sample_bound));
    }
    {
        const double alpha = bounds::second_order_alpha_floor(arms, rounds);
        bounds::BoundQuery query;
        query.kind = bounds::BoundKind::thm6_lower;
        query.arms = arms;
        query.rounds = rounds;
        query.alpha = alpha;
        const auto report = bounds::validate_hypotheses(query);
        const auto spec = envs::BernoulliFamilySpec::lemma5(arms, rounds, alpha / 2.0, 0);
        RngStream stream = RngStream::derive(options.master_seed, fnv1a64("tails-var"), 0);
        const auto stats =
            runner::ball_violation_rate(spec, alpha, BallKind::small_variation, reps, stream);
        add(suite, "small-variation-ball-tail",
            report.ok && static_cast<double>(stats.failures) <= count_bound,
            fmt("failures=%g; allowance=%.4g; per-sample bound=%.4g",
                static_cast<double>(stats.failures), count_bound, stats.per_sample_bound));
    }
    {
        const long w_rounds = 256;
        const auto spec =
            envs::ClippedGaussianSpec::with_gap(arms, w_rounds, 0.15, 1.0 / 30.0, 0);
        RngStream stream = RngStream::derive(options.master_seed, fnv1a64("tails-w"), 0);
        const auto stats = runner::hoeffding_w_check(spec, w_rounds, reps, stream);
        const double allowance = stats.bound + 4.0 * std::sqrt(stats.bound / reps);
        add(suite, "indicator-sum-tail", stats.frequency <= allowance,
            fmt("frequency=%.6g; exp(-T/32)=%.6g; allowance=%.6g", stats.frequency,
                stats.bound, allowance));
    }
    return suite;
}

SuiteResult run_lower_bounds(const SuiteOptions& options) {
    SuiteResult suite{"lower_bounds", {}};

    // Correlated-construction witness: worst-arm tail frequency and mean.
    {
        const int arms = 2;
        const long rounds = 8192;
        const double delta = 0.15;
        const int reps = 2000;
        bounds::BoundQuery threshold_query;
        threshold_query.kind = bounds::BoundKind::thm1_lower;
        threshold_query.arms = arms;
        threshold_query.rounds = rounds;
        threshold_query.delta = delta;
        const double threshold = bounds::evaluate_bound(threshold_query);
        const double frequency_floor =
            delta / 2.0 - 3.0 * std::sqrt(delta / (2.0 * static_cast<double>(reps)));
        bounds::BoundQuery mean_query;
        mean_query.kind = bounds::BoundKind::cor7_lower;
        mean_query.arms = arms;
        mean_query.rounds = rounds;
        mean_query.rho = 2.0 * envs::ClippedGaussianSpec::theorem1(arms, rounds, delta, 0).gap;
        const double mean_floor = bounds::evaluate_bound(mean_query);

        runner::ExperimentPlan plan;
        plan.replications = reps;
        plan.master_seed = options.master_seed;
        plan.workers = options.workers;
        const std::vector<std::pair<policies::Kind, std::optional<double>>> tested = {
            {policies::Kind::exp3, std::nullopt},
            {policies::Kind::exp3p, delta},
            {policies::Kind::exp3ix, std::nullopt},
        };
        for (const auto& [kind, policy_delta] : tested) {
            for (int target = 0; target < arms; ++target) {
                plan.cells.push_back(
                    {envs::ClippedGaussianSpec::theorem1(arms, rounds, delta, target),
                     make_policy(kind, arms, rounds, policy_delta)});
            }
        }
        const auto stats = runner::run_plan(plan);
        for (const auto& worst : runner::worst_case_over_targets(stats)) {
            add(suite, "tail-witness-" + worst.policy,
                worst.worst_tail_frequency >= frequency_floor,
                fmt("worst tail freq=%.4g; floor=%.4g; threshold=%.6g",
                    worst.worst_tail_frequency, frequency_floor, threshold) +
                    "; target " + worst.worst_tail_target);
            add(suite, "mean-witness-" + worst.policy, worst.worst_mean >= mean_floor,
                fmt("worst mean=%.6g; floor=%.6g", worst.worst_mean, mean_floor) +
                    "; target " + worst.worst_mean_target);
        }
    }

    // Mixture expectation witness for every implemented policy.
    {
        const long rounds = 4096;
        const double alpha = 0.5;
        const int reps = 2000;
        for (int arms : {2, 4}) {
            bounds::BoundQuery query;
            query.kind = bounds::BoundKind::lemma5_lower;
            query.arms = arms;
            query.rounds = rounds;
            query.alpha = alpha;
            const double floor = bounds::evaluate_bound(query);

            runner::ExperimentPlan plan;
            plan.replications = reps;
            plan.master_seed = options.master_seed;
            plan.workers = options.workers;
            const runner::MixtureSpec mixture{
                envs::BernoulliFamilySpec::lemma5(arms, rounds, alpha, 0)};
            const std::vector<std::pair<policies::Kind, std::optional<double>>> tested = {
                {policies::Kind::uniform, std::nullopt},
                {policies::Kind::exp3, std::nullopt},
                {policies::Kind::exp3p, 0.15},
                {policies::Kind::exp3ix, std::nullopt},
            };
            for (const auto& [kind, policy_delta] : tested) {
                plan.cells.push_back({mixture, make_policy(kind, arms, rounds, policy_delta)});
            }
            const auto stats = runner::run_plan(plan);
            for (const auto& cell : stats.cells) {
                const double needed = floor - 3.0 * cell.std_error;
                char name[96];
                std::snprintf(name, sizeof(name), "mixture-mean-K%d-%s", arms,
                              cell.policy.c_str());
                add(suite, name, cell.mean_regret >= needed,
                    fmt("mean=%.6g; bound=%.6g; bound-3se=%.6g", cell.mean_regret, floor,
                        needed));
            }
        }
    }
    return suite;
}

SuiteResult run_scaling(const SuiteOptions& options) {
    SuiteResult suite{"scaling", {}};
    const int reps = options.replications.value_or(500);
    if (reps < 50) {
        throw CapacityError(
            "scaling suite: fewer than 50 replications cannot resolve the growth exponent");
    }
    const std::vector<long> grid = {256, 512, 1024, 2048, 4096, 8192, 16384};
    const int arms = 2;
    const double alpha = 0.5;

    std::vector<double> means;
    means.reserve(grid.size());
    for (long rounds : grid) {
        runner::ExperimentPlan plan;
        plan.replications = reps;
        plan.master_seed = options.master_seed;
        plan.workers = options.workers;
        plan.cells.push_back(
            {runner::MixtureSpec{envs::BernoulliFamilySpec::lemma5(arms, rounds, alpha, 0)},
             make_policy(policies::Kind::exp3, arms, rounds)});
        means.push_back(runner::run_plan(plan).cells.front().mean_regret);
    }
    const auto fit = runner::fit_power_law(grid, means);
    add(suite, "exponent-in-band", fit.exponent >= 0.40 && fit.exponent <= 0.60,
        fmt("exponent=%.4g; band=[0.40,0.60]; residual rms=%.3g", fit.exponent,
            fit.residual_rms));

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const long rounds = grid[i];
        runner::ExperimentPlan plan;
        plan.replications = reps;
        plan.master_seed = options.master_seed;
        plan.workers = options.workers;
        for (int target = 0; target < arms; ++target) {
            plan.cells.push_back(
                {envs::BernoulliFamilySpec::lemma5(arms, rounds, alpha, target),
                 make_policy(policies::Kind::exp3ix, arms, rounds)});
        }
        const auto stats = runner::run_plan(plan);
        const auto worst = runner::worst_case_over_targets(stats);
        const double ceiling =
            10.0 * std::sqrt(static_cast<double>(arms) * static_cast<double>(rounds) *
                             std::log(static_cast<double>(arms)));
        char name[64];
        std::snprintf(name, sizeof(name), "upper-sanity-T%ld", rounds);
        add(suite, name, worst.front().worst_mean <= ceiling,
            fmt("worst mean=%.6g; ceiling=%.6g", worst.front().worst_mean, ceiling));
    }
    return suite;
}

SuiteResult run_determinism(const SuiteOptions& options) {
    SuiteResult suite{"determinism", {}};
    runner::ExperimentPlan plan;
    plan.replications = 16;
    plan.master_seed = options.master_seed;
    plan.workers = options.workers;
    const int arms = 2;
    const long rounds = 64;
    plan.cells.push_back({envs::BernoulliFamilySpec::lemma5(arms, rounds, 0.5, std::nullopt),
                          make_policy(policies::Kind::uniform, arms, rounds)});
    plan.cells.push_back(
        {runner::MixtureSpec{envs::BernoulliFamilySpec::lemma5(arms, rounds, 0.5, 0)},
         make_policy(policies::Kind::exp3, arms, rounds)});
    plan.cells.push_back({envs::ClippedGaussianSpec::theorem1(arms, rounds, 0.1, 1),
                          make_policy(policies::Kind::exp3ix, arms, rounds)});

    const std::string first = csv::render_regret_csv(runner::run_plan(plan));
    runner::ExperimentPlan sequential = plan;
    sequential.workers = 1;
    const std::string second = csv::render_regret_csv(runner::run_plan(sequential));
    add(suite, "replay-byte-identical", first == second,
        first == second ? "two runs rendered identical bytes"
                        : "renderings differ between runs");
    return suite;
}

std::vector<std::string> suite_names() {
    return {"inequalities", "oracle",  "constructions", "tails",
            "lower_bounds", "scaling", "determinism"};
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& options) {
    if (name == "inequalities") return run_inequalities(options);
    if (name == "oracle") return run_oracle(options);
    if (name == "constructions") return run_constructions(options);
    if (name == "tails") return run_tails(options);
    if (name == "lower_bounds") return run_lower_bounds(options);
    if (name == "scaling") return run_scaling(options);
    if (name == "determinism") return run_determinism(options);
    throw ArgumentError("unknown verify suite: " + name);
}

} // namespace banditlb::verify
