#include "banditlb/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <thread>

#include "banditlb/bounds.hpp"
#include "banditlb/errors.hpp"
#include "banditlb/kahan.hpp"

namespace banditlb::runner {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string real17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int resolve_workers(int requested, int jobs) {
    int workers = requested > 0 ? requested
                                : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    return std::min(workers, std::max(jobs, 1));
}

// Runs fn(0..jobs-1) across the workers; each job writes only its own slot,
// so results are independent of scheduling.
template <typename Fn>
void parallel_for(int jobs, int workers, Fn&& fn) {
    workers = resolve_workers(workers, jobs);
    if (workers <= 1) {
        for (int i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& thread : pool) thread.join();
}

} // namespace

std::string env_family(const EnvSpec& env) {
    if (std::holds_alternative<envs::ClippedGaussianSpec>(env)) return "clipped_gaussian";
    if (std::holds_alternative<envs::BernoulliFamilySpec>(env)) return "bernoulli";
    return "bernoulli_mixture";
}

std::string env_params(const EnvSpec& env) {
    if (const auto* cg = std::get_if<envs::ClippedGaussianSpec>(&env)) {
        std::string mode = cg->mode == envs::ClippedGaussianSpec::Mode::theorem1 ? "theorem1"
                           : cg->mode == envs::ClippedGaussianSpec::Mode::theorem2
                               ? "theorem2"
                               : "gap";
        std::string out = "K=" + std::to_string(cg->arms) + ";T=" + std::to_string(cg->rounds) +
                          ";delta=" + real17(cg->delta) + ";mode=" + mode +
                          ";gap=" + real17(cg->gap);
        if (cg->mode == envs::ClippedGaussianSpec::Mode::theorem2) {
            out += ";C=" + real17(cg->premise_constant);
        }
        return out;
    }
    const envs::BernoulliFamilySpec& base =
        std::holds_alternative<MixtureSpec>(env) ? std::get<MixtureSpec>(env).base
                                                 : std::get<envs::BernoulliFamilySpec>(env);
    return "K=" + std::to_string(base.arms) + ";T=" + std::to_string(base.rounds) +
           ";alpha=" + real17(base.alpha) + ";epsilon=" + real17(base.epsilon);
}

std::string env_target_label(const EnvSpec& env) {
    if (const auto* cg = std::get_if<envs::ClippedGaussianSpec>(&env)) {
        return std::to_string(cg->target_arm + 1);
    }
    if (const auto* bf = std::get_if<envs::BernoulliFamilySpec>(&env)) {
        return bf->target_arm ? std::to_string(*bf->target_arm + 1) : "0";
    }
    return "mix";
}

int env_arms(const EnvSpec& env) {
    if (const auto* cg = std::get_if<envs::ClippedGaussianSpec>(&env)) return cg->arms;
    if (const auto* bf = std::get_if<envs::BernoulliFamilySpec>(&env)) return bf->arms;
    return std::get<MixtureSpec>(env).base.arms;
}

long env_rounds(const EnvSpec& env) {
    if (const auto* cg = std::get_if<envs::ClippedGaussianSpec>(&env)) return cg->rounds;
    if (const auto* bf = std::get_if<envs::BernoulliFamilySpec>(&env)) return bf->rounds;
    return std::get<MixtureSpec>(env).base.rounds;
}

std::optional<double> env_delta(const EnvSpec& env) {
    if (const auto* cg = std::get_if<envs::ClippedGaussianSpec>(&env)) return cg->delta;
    return std::nullopt;
}

LossMatrix sample_env(const EnvSpec& env, RngStream& stream) {
    if (const auto* cg = std::get_if<envs::ClippedGaussianSpec>(&env)) {
        return envs::sample_clipped_gaussian(*cg, stream);
    }
    if (const auto* bf = std::get_if<envs::BernoulliFamilySpec>(&env)) {
        return envs::sample_bernoulli_family(*bf, stream);
    }
    const auto family = envs::mixture_family(std::get<MixtureSpec>(env).base);
    return envs::sample_mixture(family, stream).first;
}

double default_tail_threshold(const EnvSpec& env) {
    if (const auto* cg = std::get_if<envs::ClippedGaussianSpec>(&env)) {
        return std::sqrt((cg->arms - 1.0) * static_cast<double>(cg->rounds) *
                         std::log(1.0 / (4.0 * cg->delta))) /
               27.0;
    }
    const envs::BernoulliFamilySpec& base =
        std::holds_alternative<MixtureSpec>(env) ? std::get<MixtureSpec>(env).base
                                                 : std::get<envs::BernoulliFamilySpec>(env);
    return std::sqrt(base.alpha * (1.0 - base.alpha) * static_cast<double>(base.rounds) *
                     base.arms) /
           8.0;
}

std::string Cell::canonical() const {
    std::string out = "env=" + env_family(env) + ";" + env_params(env) +
                      ";target=" + env_target_label(env) + "|policy=" +
                      policies::kind_name(policy.kind);
    if (policy.delta) out += ";delta=" + real17(*policy.delta);
    if (policy.learning_rate) out += ";eta=" + real17(*policy.learning_rate);
    if (policy.exploration) out += ";gamma=" + real17(*policy.exploration);
    if (policy.bonus) out += ";beta=" + real17(*policy.bonus);
    return out;
}

std::uint64_t Cell::id() const { return fnv1a64(canonical()); }

void ExperimentPlan::validate() const {
    if (cells.empty()) throw ArgumentError("ExperimentPlan: no cells");
    if (replications < 1) throw ArgumentError("ExperimentPlan: replications must be >= 1");
    long total = 0;
    for (const auto& cell : cells) {
        cell.policy.validate();
        if (cell.policy.arms != env_arms(cell.env) ||
            cell.policy.horizon != env_rounds(cell.env)) {
            throw StructuralError("ExperimentPlan: policy dimensions do not match environment");
        }
        total += env_rounds(cell.env) * static_cast<long>(replications);
        if (total > max_total_rounds) {
            throw CapacityError("ExperimentPlan: total simulated rounds exceed the budget of " +
                                std::to_string(max_total_rounds));
        }
    }
}

double empirical_quantile(std::span<const double> sorted_values, double level) {
    if (sorted_values.empty()) throw ArgumentError("empirical_quantile: empty sample");
    if (!(level > 0.0 && level < 1.0)) {
        throw ArgumentError("empirical_quantile: level must lie in (0,1)");
    }
    const auto n = static_cast<double>(sorted_values.size());
    auto rank = static_cast<std::size_t>(std::ceil(level * n));
    if (rank < 1) rank = 1;
    return sorted_values[rank - 1];
}

RegretStats run_plan(const ExperimentPlan& plan) {
    plan.validate();
    RegretStats stats;
    stats.master_seed = plan.master_seed;
    stats.cells.reserve(plan.cells.size());

    for (const auto& cell : plan.cells) {
        const std::uint64_t cell_id = cell.id();
        std::vector<double> regrets(static_cast<std::size_t>(plan.replications));
        std::vector<char> outside_ball(
            plan.ball_alpha ? static_cast<std::size_t>(plan.replications) : 0, 0);
        parallel_for(plan.replications, plan.workers, [&](int rep) {
            RngStream stream = RngStream::derive(plan.master_seed, cell_id,
                                                 static_cast<std::uint64_t>(rep));
            auto losses = std::make_shared<const LossMatrix>(sample_env(cell.env, stream));
            if (plan.ball_alpha) {
                outside_ball[static_cast<std::size_t>(rep)] =
                    ball_membership(*losses, *plan.ball_alpha, plan.ball_kind) ? 0 : 1;
            }
            const Trajectory trajectory = policies::run_episode(cell.policy, losses, stream);
            regrets[static_cast<std::size_t>(rep)] = regret(trajectory);
        });

        CellStats row;
        row.env_family = env_family(cell.env);
        row.env_params = env_params(cell.env);
        row.target_label = env_target_label(cell.env);
        row.policy = cell.policy.name();
        row.arms = env_arms(cell.env);
        row.rounds = env_rounds(cell.env);
        row.replications = plan.replications;
        row.cell_id = cell_id;

        KahanSum mean_acc;
        for (double r : regrets) mean_acc.add(r);
        row.mean_regret = mean_acc.value() / plan.replications;
        if (plan.replications >= 2) {
            KahanSum sq_acc;
            for (double r : regrets) {
                const double d = r - row.mean_regret;
                sq_acc.add(d * d);
            }
            const double sample_var = sq_acc.value() / (plan.replications - 1);
            row.std_error = std::sqrt(sample_var / plan.replications);
        } else {
            row.std_error = kNaN;
        }

        std::vector<double> sorted = regrets;
        std::sort(sorted.begin(), sorted.end());
        row.q50 = empirical_quantile(sorted, 0.5);
        row.q90 = empirical_quantile(sorted, 0.9);
        const auto delta = env_delta(cell.env);
        row.q_delta = delta ? empirical_quantile(sorted, 1.0 - *delta) : kNaN;

        row.tail_threshold = plan.tail_threshold.value_or(default_tail_threshold(cell.env));
        long hits = 0;
        for (double r : regrets) {
            if (r >= row.tail_threshold) ++hits;
        }
        row.tail_frequency = static_cast<double>(hits) / plan.replications;

        if (plan.ball_alpha) {
            long failures = 0;
            for (char outside : outside_ball) failures += outside;
            row.ball_failures = failures;
        }

        stats.cells.push_back(std::move(row));
    }
    return stats;
}

std::vector<WorstCaseCell> worst_case_over_targets(const RegretStats& stats) {
    struct Group {
        const CellStats* arms_seen[64] = {};
        int arms = 0;
    };
    std::map<std::string, Group> groups;
    for (const auto& row : stats.cells) {
        if (row.target_label == "0" || row.target_label == "mix") continue;
        const int target = std::stoi(row.target_label);
        const std::string key =
            row.env_family + "|" + row.env_params + "|" + row.policy;
        Group& group = groups[key];
        group.arms = row.arms;
        if (target < 1 || target > 64) {
            throw StructuralError("worst_case_over_targets: target out of supported range");
        }
        if (group.arms_seen[target - 1] != nullptr) {
            throw StructuralError("worst_case_over_targets: duplicate target row");
        }
        group.arms_seen[target - 1] = &row;
    }
    if (groups.empty()) {
        throw StructuralError("worst_case_over_targets: no targeted environment rows");
    }

    std::vector<WorstCaseCell> out;
    out.reserve(groups.size());
    for (const auto& [key, group] : groups) {
        for (int j = 0; j < group.arms; ++j) {
            if (group.arms_seen[j] == nullptr) {
                throw StructuralError(
                    "worst_case_over_targets: incomplete family, missing target " +
                    std::to_string(j + 1) + " in " + key);
            }
        }
        WorstCaseCell worst;
        const CellStats* first = group.arms_seen[0];
        worst.env_family = first->env_family;
        worst.env_params = first->env_params;
        worst.policy = first->policy;
        worst.rounds = first->rounds;
        worst.family_size = group.arms;
        worst.worst_mean = -std::numeric_limits<double>::infinity();
        worst.worst_tail_frequency = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < group.arms; ++j) {
            const CellStats* row = group.arms_seen[j];
            if (row->mean_regret > worst.worst_mean) {
                worst.worst_mean = row->mean_regret;
                worst.worst_mean_target = row->target_label;
            }
            if (row->tail_frequency > worst.worst_tail_frequency) {
                worst.worst_tail_frequency = row->tail_frequency;
                worst.worst_tail_target = row->target_label;
            }
        }
        out.push_back(std::move(worst));
    }
    return out;
}

BallViolationStats ball_violation_rate(const envs::BernoulliFamilySpec& spec, double alpha,
                                       BallKind kind, int replications, RngStream& stream) {
    spec.validate();
    if (replications < 1) throw ArgumentError("ball_violation_rate: replications must be >= 1");
    if (kind == BallKind::small_loss && !(alpha >= 0.0 && alpha <= 1.0)) {
        throw ArgumentError("ball_violation_rate: small-loss alpha must lie in [0,1]");
    }
    if (kind == BallKind::small_variation && !(alpha >= 0.0 && alpha <= 0.25)) {
        throw ArgumentError("ball_violation_rate: small-variation alpha must lie in [0,1/4]");
    }
    long failures = 0;
    for (int rep = 0; rep < replications; ++rep) {
        const LossMatrix losses = envs::sample_bernoulli_family(spec, stream);
        if (!ball_membership(losses, alpha, kind)) ++failures;
    }
    BallViolationStats out;
    out.failures = failures;
    out.replications = replications;
    out.frequency = static_cast<double>(failures) / replications;
    out.per_sample_bound = 1.0 / (32.0 * static_cast<double>(spec.rounds));
    return out;
}

PowerFit fit_power_law(std::span<const long> rounds, std::span<const double> means) {
    if (rounds.size() != means.size()) {
        throw StructuralError("fit_power_law: grid and means differ in length");
    }
    if (rounds.size() < 4) throw StructuralError("fit_power_law: need at least 4 grid points");
    for (std::size_t i = 0; i + 1 < rounds.size(); ++i) {
        if (rounds[i + 1] <= rounds[i]) {
            throw StructuralError("fit_power_law: grid must be strictly increasing");
        }
    }
    std::vector<double> xs(rounds.size()), ys(rounds.size());
    for (std::size_t i = 0; i < rounds.size(); ++i) {
        if (!(means[i] > 0.0)) throw StructuralError("fit_power_law: means must be positive");
        xs[i] = std::log(static_cast<double>(rounds[i]));
        ys[i] = std::log(means[i]);
    }
    const double n = static_cast<double>(xs.size());
    KahanSum sx, sy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx.add(xs[i]);
        sy.add(ys[i]);
    }
    const double mean_x = sx.value() / n;
    const double mean_y = sy.value() / n;
    KahanSum sxy, sxx;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy.add((xs[i] - mean_x) * (ys[i] - mean_y));
        sxx.add((xs[i] - mean_x) * (xs[i] - mean_x));
    }
    PowerFit fit;
    fit.exponent = sxy.value() / sxx.value();
    fit.intercept = mean_y - fit.exponent * mean_x;
    KahanSum residual_sq;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.exponent * xs[i]);
        residual_sq.add(r * r);
    }
    fit.residual_rms = std::sqrt(residual_sq.value() / n);
    return fit;
}

HoeffdingCheckStats hoeffding_w_check(const envs::ClippedGaussianSpec& spec, long rounds,
                                      int replications, RngStream& stream) {
    spec.validate();
    if (rounds < 1) throw ArgumentError("hoeffding_w_check: rounds must be >= 1");
    if (replications < 1) throw ArgumentError("hoeffding_w_check: replications must be >= 1");
    const double floor = 32.0 * std::log(2.0 / spec.delta);
    if (static_cast<double>(rounds) < floor) {
        throw ArgumentError("hoeffding_w_check: rounds below 32 log(2/delta)");
    }
    const double sigma = std::sqrt(spec.sigma2);
    const double lo = 2.0 * spec.gap;
    const double hi = 1.0 - 2.0 * spec.gap;
    const long cutoff_numerator = 3L * rounds; // event: sum W_t <= 3T/4
    long hits = 0;
    for (int rep = 0; rep < replications; ++rep) {
        long inside = 0;
        for (long t = 0; t < rounds; ++t) {
            const double z = stream.next_gaussian(0.5, sigma);
            if (z >= lo && z <= hi) ++inside;
        }
        if (4L * inside <= cutoff_numerator) ++hits;
    }
    HoeffdingCheckStats out;
    out.hits = hits;
    out.replications = replications;
    out.frequency = static_cast<double>(hits) / replications;
    out.bound = std::exp(-static_cast<double>(rounds) / 32.0);
    return out;
}

double estimate_regret_constant(policies::Kind kind, std::optional<double> policy_delta,
                                int arms, double env_delta, std::span<const long> t_grid,
                                int replications, std::uint64_t master_seed, int workers) {
    if (t_grid.empty()) throw ArgumentError("estimate_regret_constant: empty horizon grid");
    double c_hat = 0.0;
    for (long rounds : t_grid) {
        ExperimentPlan plan;
        plan.replications = replications;
        plan.master_seed = master_seed;
        plan.workers = workers;
        policies::PolicyConfig policy;
        policy.kind = kind;
        policy.delta = policy_delta;
        policy.arms = arms;
        policy.horizon = rounds;
        for (int j = 0; j < arms; ++j) {
            plan.cells.push_back(
                {envs::ClippedGaussianSpec::theorem1(arms, rounds, env_delta, j), policy});
        }
        const RegretStats stats = run_plan(plan);
        const auto worst = worst_case_over_targets(stats);
        for (const auto& cell : worst) {
            c_hat = std::max(c_hat, cell.worst_mean /
                                        std::sqrt((arms - 1.0) * static_cast<double>(rounds)));
        }
    }
    return c_hat;
}

} // namespace banditlb::runner
