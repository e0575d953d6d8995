#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "banditlb/core.hpp"
#include "banditlb/rng.hpp"

namespace banditlb::policies {

enum class Kind { uniform, exp3, exp3p, exp3ix };

const char* kind_name(Kind kind);
std::optional<Kind> kind_from_string(const std::string& name);

// A policy plus its tuning. Defaults follow the standard published tunings:
//   exp3:   eta = sqrt(2 ln(K) / (T K))
//   exp3ix: eta as exp3, gamma = eta / 2
//   exp3p:  eta = 0.95 sqrt(ln(K)/(T K)), gamma = 1.05 sqrt(K ln(K)/T) (capped at 1),
//           beta = sqrt(ln(K/delta)/(T K)); requires delta.
struct PolicyConfig {
    Kind kind = Kind::uniform;
    int arms = 0;
    long horizon = 0;
    std::optional<double> delta;         // exp3p confidence input
    std::optional<double> learning_rate; // eta override
    std::optional<double> exploration;   // gamma override
    std::optional<double> bonus;         // beta override

    void validate() const;
    std::string name() const; // e.g. "exp3", "exp3p(0.15)"
};

// Exponential-weights state over cumulative importance-weighted estimates.
// Log-weights are normalized with a max shift, so horizons up to 1e6 never
// produce non-finite weights. Plain value type; copy to branch histories.
class PolicyState {
public:
    explicit PolicyState(const PolicyConfig& config);

    const PolicyConfig& config() const { return config_; }
    long updates_applied() const { return updates_; }

    void action_distribution(std::vector<double>& out) const;
    std::vector<double> action_distribution() const;

    // Applies the bandit feedback (chosen arm, its loss in [0,1]).
    void update(int arm, double loss);
    PolicyState updated(int arm, double loss) const;

    // Cumulative estimated losses (exp3/exp3ix) or gains (exp3p); uniform
    // keeps an all-zero vector. Exposed for estimator tests.
    const std::vector<double>& cumulative_estimates() const { return estimates_; }

    double learning_rate() const { return eta_; }
    double exploration() const { return gamma_; }
    double bonus() const { return beta_; }

private:
    PolicyConfig config_;
    double eta_ = 0.0;
    double gamma_ = 0.0;
    double beta_ = 0.0;
    std::vector<double> estimates_;
    long updates_ = 0;

    void update_with_distribution(int arm, double loss, const std::vector<double>& dist);

    friend Trajectory run_episode(const PolicyConfig&, std::shared_ptr<const LossMatrix>,
                                  RngStream&, bool);
};

// Full bandit feedback loop against a fixed loss matrix: sample from the
// action distribution, reveal only the chosen entry, update. When
// track_distributions is set the per-round distributions are retained for the
// cumulative-variance diagnostic.
Trajectory run_episode(const PolicyConfig& config, std::shared_ptr<const LossMatrix> losses,
                       RngStream& stream, bool track_distributions = false);

} // namespace banditlb::policies
