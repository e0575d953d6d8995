#include "banditlb/policies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "banditlb/errors.hpp"

namespace banditlb::policies {

const char* kind_name(Kind kind) {
    switch (kind) {
        case Kind::uniform: return "uniform";
        case Kind::exp3: return "exp3";
        case Kind::exp3p: return "exp3p";
        case Kind::exp3ix: return "exp3ix";
    }
    return "unknown";
}

std::optional<Kind> kind_from_string(const std::string& name) {
    if (name == "uniform") return Kind::uniform;
    if (name == "exp3") return Kind::exp3;
    if (name == "exp3p") return Kind::exp3p;
    if (name == "exp3ix") return Kind::exp3ix;
    return std::nullopt;
}

void PolicyConfig::validate() const {
    if (arms < 2) throw ArgumentError("PolicyConfig: arms must be >= 2");
    if (horizon < 1) throw ArgumentError("PolicyConfig: horizon must be >= 1");
    if (kind == Kind::exp3p) {
        if (!delta) throw ArgumentError("PolicyConfig: exp3p requires delta");
        if (!(*delta > 0.0 && *delta < 1.0)) {
            throw ArgumentError("PolicyConfig: exp3p delta must lie in (0,1)");
        }
    }
    if (learning_rate && !(*learning_rate > 0.0)) {
        throw ArgumentError("PolicyConfig: learning rate must be positive");
    }
    if (exploration && !(*exploration >= 0.0 && *exploration <= 1.0)) {
        throw ArgumentError("PolicyConfig: exploration must lie in [0,1]");
    }
    if (bonus && !(*bonus >= 0.0)) {
        throw ArgumentError("PolicyConfig: bonus must be >= 0");
    }
}

std::string PolicyConfig::name() const {
    if (kind == Kind::exp3p && delta) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "exp3p(%g)", *delta);
        return buf;
    }
    return kind_name(kind);
}

PolicyState::PolicyState(const PolicyConfig& config) : config_(config) {
    config_.validate();
    const double k = static_cast<double>(config_.arms);
    const double t = static_cast<double>(config_.horizon);
    const double log_k = std::log(k);
    switch (config_.kind) {
        case Kind::uniform:
            break;
        case Kind::exp3:
            eta_ = config_.learning_rate.value_or(std::sqrt(2.0 * log_k / (t * k)));
            break;
        case Kind::exp3ix:
            eta_ = config_.learning_rate.value_or(std::sqrt(2.0 * log_k / (t * k)));
            gamma_ = config_.exploration.value_or(eta_ / 2.0);
            break;
        case Kind::exp3p:
            eta_ = config_.learning_rate.value_or(0.95 * std::sqrt(log_k / (t * k)));
            gamma_ = config_.exploration.value_or(
                std::min(1.0, 1.05 * std::sqrt(k * log_k / t)));
            beta_ = config_.bonus.value_or(std::sqrt(std::log(k / *config_.delta) / (t * k)));
            break;
    }
    estimates_.assign(static_cast<std::size_t>(config_.arms), 0.0);
}

void PolicyState::action_distribution(std::vector<double>& out) const {
    const int arms = config_.arms;
    out.resize(static_cast<std::size_t>(arms));
    if (config_.kind == Kind::uniform) {
        std::fill(out.begin(), out.end(), 1.0 / arms);
        return;
    }
    // Log-weights: -eta * estimated losses, or +eta * estimated gains (exp3p).
    const double sign = (config_.kind == Kind::exp3p) ? 1.0 : -1.0;
    double max_weight = sign * eta_ * estimates_[0];
    for (int i = 1; i < arms; ++i) {
        max_weight = std::max(max_weight, sign * eta_ * estimates_[static_cast<std::size_t>(i)]);
    }
    double total = 0.0;
    for (int i = 0; i < arms; ++i) {
        const double w = std::exp(sign * eta_ * estimates_[static_cast<std::size_t>(i)] - max_weight);
        out[static_cast<std::size_t>(i)] = w;
        total += w;
    }
    if (config_.kind == Kind::exp3p) {
        const double mix = gamma_ / arms;
        for (double& p : out) p = (1.0 - gamma_) * (p / total) + mix;
    } else {
        for (double& p : out) p /= total;
    }
}

std::vector<double> PolicyState::action_distribution() const {
    std::vector<double> out;
    action_distribution(out);
    return out;
}

void PolicyState::update(int arm, double loss) {
    std::vector<double> dist;
    action_distribution(dist);
    update_with_distribution(arm, loss, dist);
}

PolicyState PolicyState::updated(int arm, double loss) const {
    PolicyState next = *this;
    next.update(arm, loss);
    return next;
}

void PolicyState::update_with_distribution(int arm, double loss,
                                           const std::vector<double>& dist) {
    if (arm < 0 || arm >= config_.arms) throw ArgumentError("PolicyState: arm out of range");
    if (!(loss >= 0.0 && loss <= 1.0)) {
        throw ArgumentError("PolicyState: loss must lie in [0,1]");
    }
    const double p = dist[static_cast<std::size_t>(arm)];
    switch (config_.kind) {
        case Kind::uniform:
            break;
        case Kind::exp3:
            if (p <= 0.0) {
                throw ArgumentError("PolicyState: observed arm has zero probability");
            }
            estimates_[static_cast<std::size_t>(arm)] += loss / p;
            break;
        case Kind::exp3ix:
            estimates_[static_cast<std::size_t>(arm)] += loss / (p + gamma_);
            break;
        case Kind::exp3p: {
            // Gain formulation with bias bonus on every arm.
            for (int i = 0; i < config_.arms; ++i) {
                estimates_[static_cast<std::size_t>(i)] +=
                    beta_ / dist[static_cast<std::size_t>(i)];
            }
            estimates_[static_cast<std::size_t>(arm)] += (1.0 - loss) / p;
            break;
        }
    }
    ++updates_;
}

Trajectory run_episode(const PolicyConfig& config, std::shared_ptr<const LossMatrix> losses,
                       RngStream& stream, bool track_distributions) {
    if (!losses) throw StructuralError("run_episode: missing loss matrix");
    if (config.arms != losses->arms() || config.horizon != losses->rounds()) {
        throw StructuralError("run_episode: policy dimensions do not match loss matrix");
    }
    PolicyState state(config);
    const long rounds = losses->rounds();
    Trajectory trajectory;
    trajectory.losses = losses;
    trajectory.actions.reserve(static_cast<std::size_t>(rounds));
    trajectory.incurred.reserve(static_cast<std::size_t>(rounds));
    if (track_distributions) {
        trajectory.distributions.reserve(static_cast<std::size_t>(rounds) * config.arms);
    }
    std::vector<double> dist;
    for (long t = 0; t < rounds; ++t) {
        state.action_distribution(dist);
        const int arm = stream.next_categorical(dist);
        const double loss = (*losses)(t, arm);
        trajectory.actions.push_back(arm);
        trajectory.incurred.push_back(loss);
        if (track_distributions) {
            trajectory.distributions.insert(trajectory.distributions.end(), dist.begin(),
                                            dist.end());
        }
        state.update_with_distribution(arm, loss, dist);
    }
    return trajectory;
}

} // namespace banditlb::policies
