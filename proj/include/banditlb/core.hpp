#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace banditlb {

// Realized oblivious loss sequence: `rounds x arms` values in [0,1], fixed
// before play begins. Immutable after construction.
class LossMatrix {
public:
    LossMatrix(long rounds, int arms, std::vector<double> values);

    static LossMatrix constant(long rounds, int arms, double value);
    static LossMatrix from_rows(const std::vector<std::vector<double>>& rows);

    long rounds() const { return rounds_; }
    int arms() const { return arms_; }

    double operator()(long round, int arm) const {
        return values_[static_cast<std::size_t>(round) * arms_ + arm];
    }
    std::span<const double> row(long round) const {
        return {values_.data() + static_cast<std::size_t>(round) * arms_,
                static_cast<std::size_t>(arms_)};
    }
    const std::vector<double>& values() const { return values_; }

private:
    long rounds_;
    int arms_;
    std::vector<double> values_; // row-major
};

// One episode against a fixed LossMatrix: the chosen arms, the losses that
// were actually revealed, and (optionally) the per-round action distributions
// needed for the cumulative-policy-variance diagnostic.
struct Trajectory {
    std::shared_ptr<const LossMatrix> losses;
    std::vector<int> actions;       // 0-based arm indices
    std::vector<double> incurred;   // incurred[t] == (*losses)(t, actions[t])
    std::vector<double> distributions; // row-major rounds x arms; empty unless tracked

    long rounds() const { return static_cast<long>(actions.size()); }
    bool has_distributions() const { return !distributions.empty(); }

    // Throws StructuralError if the trajectory is inconsistent with its matrix.
    void validate() const;

    // Pull counts per arm after `upto` rounds (upto <= rounds()).
    std::vector<long> arm_counts(long upto) const;
};

double regret(const Trajectory& trajectory);

// (best cumulative loss, argmin arm); ties broken toward the lowest index.
std::pair<double, int> best_cumulative_loss(const LossMatrix& losses);

struct QuadraticVariation {
    double value;                    // sum of squared deviations from the mean vector
    std::vector<double> mean_losses; // per-arm mean over rounds
};
QuadraticVariation quadratic_variation(const LossMatrix& losses);

enum class BallKind { small_loss, small_variation };

// small_loss: best cumulative loss / rounds <= alpha (alpha in [0,1]).
// small_variation: quadratic variation / (rounds*arms) <= alpha (alpha in [0,1/4]).
bool ball_membership(const LossMatrix& losses, double alpha, BallKind kind);

struct RangeStats {
    double effective_range; // largest within-round spread between two arms
    double max_loss;        // largest single entry
};
RangeStats effective_range_stats(const LossMatrix& losses);

struct RegretSummary {
    double regret;
    int best_arm;
    double best_cumulative;
    double quadratic_variation;
    std::vector<double> mean_losses;
    double effective_range;
    double max_loss;
    double policy_variance; // NaN unless the trajectory tracked distributions
};
RegretSummary summarize(const Trajectory& trajectory);

// Sum over rounds of the variance of the incurred loss under the per-round
// action distribution. Requires tracked distributions.
double cumulative_policy_variance(const Trajectory& trajectory);

} // namespace banditlb
