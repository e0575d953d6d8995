#include "banditlb/core.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "banditlb/errors.hpp"
#include "banditlb/kahan.hpp"

namespace banditlb {

LossMatrix::LossMatrix(long rounds, int arms, std::vector<double> values)
    : rounds_(rounds), arms_(arms), values_(std::move(values)) {
    if (rounds_ < 1) throw ArgumentError("LossMatrix: rounds must be >= 1");
    if (arms_ < 2) throw ArgumentError("LossMatrix: arms must be >= 2");
    if (values_.size() != static_cast<std::size_t>(rounds_) * arms_) {
        throw StructuralError("LossMatrix: values size does not match rounds*arms");
    }
    for (double v : values_) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ArgumentError("LossMatrix: every entry must lie in [0,1]");
        }
    }
}

LossMatrix LossMatrix::constant(long rounds, int arms, double value) {
    return LossMatrix(rounds, arms,
                      std::vector<double>(static_cast<std::size_t>(rounds) * arms, value));
}

LossMatrix LossMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw ArgumentError("LossMatrix: need at least one row");
    const std::size_t arms = rows.front().size();
    std::vector<double> values;
    values.reserve(rows.size() * arms);
    for (const auto& row : rows) {
        if (row.size() != arms) throw StructuralError("LossMatrix: ragged rows");
        values.insert(values.end(), row.begin(), row.end());
    }
    return LossMatrix(static_cast<long>(rows.size()), static_cast<int>(arms),
                      std::move(values));
}

void Trajectory::validate() const {
    if (!losses) throw StructuralError("Trajectory: missing loss matrix");
    const long rounds_played = rounds();
    if (rounds_played != losses->rounds()) {
        throw StructuralError("Trajectory: action count does not match loss matrix rounds");
    }
    if (incurred.size() != actions.size()) {
        throw StructuralError("Trajectory: incurred losses do not match action count");
    }
    for (long t = 0; t < rounds_played; ++t) {
        const int arm = actions[static_cast<std::size_t>(t)];
        if (arm < 0 || arm >= losses->arms()) {
            throw StructuralError("Trajectory: action out of arm range");
        }
        if (incurred[static_cast<std::size_t>(t)] != (*losses)(t, arm)) {
            throw StructuralError("Trajectory: incurred loss differs from loss matrix entry");
        }
    }
    if (!distributions.empty() &&
        distributions.size() != static_cast<std::size_t>(rounds_played) * losses->arms()) {
        throw StructuralError("Trajectory: distribution block has wrong size");
    }
}

std::vector<long> Trajectory::arm_counts(long upto) const {
    if (upto < 0 || upto > rounds()) {
        throw ArgumentError("arm_counts: round bound out of range");
    }
    std::vector<long> counts(losses ? losses->arms() : 0, 0);
    for (long t = 0; t < upto; ++t) {
        ++counts[static_cast<std::size_t>(actions[static_cast<std::size_t>(t)])];
    }
    return counts;
}

double regret(const Trajectory& trajectory) {
    trajectory.validate();
    KahanSum suffered;
    for (double loss : trajectory.incurred) suffered.add(loss);
    const auto [best, arm] = best_cumulative_loss(*trajectory.losses);
    (void)arm;
    return suffered.value() - best;
}

std::pair<double, int> best_cumulative_loss(const LossMatrix& losses) {
    const int arms = losses.arms();
    std::vector<KahanSum> columns(static_cast<std::size_t>(arms));
    for (long t = 0; t < losses.rounds(); ++t) {
        const auto row = losses.row(t);
        for (int i = 0; i < arms; ++i) columns[static_cast<std::size_t>(i)].add(row[i]);
    }
    double best = columns[0].value();
    int best_arm = 0;
    for (int i = 1; i < arms; ++i) {
        const double total = columns[static_cast<std::size_t>(i)].value();
        if (total < best) {
            best = total;
            best_arm = i;
        }
    }
    return {best, best_arm};
}

QuadraticVariation quadratic_variation(const LossMatrix& losses) {
    const int arms = losses.arms();
    const long rounds = losses.rounds();
    std::vector<KahanSum> columns(static_cast<std::size_t>(arms));
    for (long t = 0; t < rounds; ++t) {
        const auto row = losses.row(t);
        for (int i = 0; i < arms; ++i) columns[static_cast<std::size_t>(i)].add(row[i]);
    }
    std::vector<double> means(static_cast<std::size_t>(arms));
    for (int i = 0; i < arms; ++i) {
        means[static_cast<std::size_t>(i)] =
            columns[static_cast<std::size_t>(i)].value() / static_cast<double>(rounds);
    }
    KahanSum total;
    for (long t = 0; t < rounds; ++t) {
        const auto row = losses.row(t);
        for (int i = 0; i < arms; ++i) {
            const double d = row[i] - means[static_cast<std::size_t>(i)];
            total.add(d * d);
        }
    }
    return {total.value(), std::move(means)};
}

bool ball_membership(const LossMatrix& losses, double alpha, BallKind kind) {
    if (kind == BallKind::small_loss) {
        if (!(alpha >= 0.0 && alpha <= 1.0)) {
            throw ArgumentError("ball_membership: small-loss alpha must lie in [0,1]");
        }
        const double best = best_cumulative_loss(losses).first;
        return best / static_cast<double>(losses.rounds()) <= alpha;
    }
    if (!(alpha >= 0.0 && alpha <= 0.25)) {
        throw ArgumentError("ball_membership: small-variation alpha must lie in [0,1/4]");
    }
    const double q = quadratic_variation(losses).value;
    return q / (static_cast<double>(losses.rounds()) * losses.arms()) <= alpha;
}

RangeStats effective_range_stats(const LossMatrix& losses) {
    double range = 0.0;
    double max_loss = 0.0;
    for (long t = 0; t < losses.rounds(); ++t) {
        const auto row = losses.row(t);
        double lo = row[0], hi = row[0];
        for (double v : row) {
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        }
        if (hi - lo > range) range = hi - lo;
        if (hi > max_loss) max_loss = hi;
    }
    return {range, max_loss};
}

double cumulative_policy_variance(const Trajectory& trajectory) {
    trajectory.validate();
    if (!trajectory.has_distributions()) {
        throw StructuralError("cumulative_policy_variance: trajectory has no distributions");
    }
    const LossMatrix& lm = *trajectory.losses;
    const int arms = lm.arms();
    KahanSum total;
    for (long t = 0; t < lm.rounds(); ++t) {
        const auto row = lm.row(t);
        const double* p = trajectory.distributions.data() +
                          static_cast<std::size_t>(t) * arms;
        double mean = 0.0, mean_sq = 0.0;
        for (int i = 0; i < arms; ++i) {
            mean += p[i] * row[i];
            mean_sq += p[i] * row[i] * row[i];
        }
        total.add(mean_sq - mean * mean);
    }
    return total.value();
}

RegretSummary summarize(const Trajectory& trajectory) {
    trajectory.validate();
    const LossMatrix& lm = *trajectory.losses;
    RegretSummary summary;
    summary.regret = regret(trajectory);
    auto [best, best_arm] = best_cumulative_loss(lm);
    summary.best_cumulative = best;
    summary.best_arm = best_arm;
    auto qv = quadratic_variation(lm);
    summary.quadratic_variation = qv.value;
    summary.mean_losses = std::move(qv.mean_losses);
    const auto range = effective_range_stats(lm);
    summary.effective_range = range.effective_range;
    summary.max_loss = range.max_loss;
    summary.policy_variance = trajectory.has_distributions()
                                  ? cumulative_policy_variance(trajectory)
                                  : std::numeric_limits<double>::quiet_NaN();
    return summary;
}

} // namespace banditlb
