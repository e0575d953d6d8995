#pragma once

#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "banditlb/core.hpp"
#include "banditlb/rng.hpp"

namespace banditlb::envs {

// Shared-draw Gaussian variance used by the correlated construction.
inline constexpr double kClippedGaussianVariance = 1.0 / (32.0 * std::numbers::ln2);

// Correlated clipped-Gaussian family: one Normal(1/2, sigma2) draw per round
// shared by all arms, with arm 0 shifted down by `gap` and the target arm
// (when it is not arm 0) shifted down by 2*gap. Everything is then clipped to
// [0,1], so exactly one arm minimizes every round and the within-round range
// never exceeds 2*gap.
struct ClippedGaussianSpec {
    enum class Mode { theorem1, theorem2, explicit_gap };

    int arms = 0;
    long rounds = 0;
    double delta = 0.0;       // confidence parameter, in (0, 1/4)
    int target_arm = 0;       // 0-based
    double gap = 0.0;         // stored explicitly so experiments can sweep it
    double sigma2 = kClippedGaussianVariance;
    Mode mode = Mode::explicit_gap;
    double premise_constant = 0.0; // C, used by theorem2 mode only

    static ClippedGaussianSpec theorem1(int arms, long rounds, double delta, int target_arm);
    static ClippedGaussianSpec theorem2(int arms, long rounds, double delta,
                                        double premise_constant, int target_arm);
    static ClippedGaussianSpec with_gap(int arms, long rounds, double delta, double gap,
                                        int target_arm);

    // The arm that minimizes every round (the most-shifted one).
    int optimal_arm() const { return target_arm; }

    void validate() const;
};

LossMatrix sample_clipped_gaussian(const ClippedGaussianSpec& spec, RngStream& stream);

// Independent Bernoulli family: the target arm draws Ber(alpha), every other
// arm draws Ber(alpha + epsilon). No target (nullopt) is the null measure with
// all arms at Ber(alpha + epsilon).
struct BernoulliFamilySpec {
    int arms = 0;
    long rounds = 0;
    double alpha = 0.0;
    double epsilon = 0.0;
    std::optional<int> target_arm; // 0-based; nullopt = null measure

    static BernoulliFamilySpec lemma5(int arms, long rounds, double alpha,
                                      std::optional<int> target_arm);
    static BernoulliFamilySpec with_epsilon(int arms, long rounds, double alpha,
                                            double epsilon, std::optional<int> target_arm);

    // Default gap: epsilon = (1/2) sqrt(alpha (1-alpha) arms / rounds).
    static double default_epsilon(int arms, long rounds, double alpha);

    void validate() const;
};

LossMatrix sample_bernoulli_family(const BernoulliFamilySpec& spec, RngStream& stream);

// Uniform mixture over the K target environments. All specs must agree except
// for their target arm, and every arm must appear exactly once.
std::pair<LossMatrix, int> sample_mixture(std::span<const BernoulliFamilySpec> specs,
                                          RngStream& stream);

// Builds the K-element family {target 0, ..., target K-1} from a base spec.
std::vector<BernoulliFamilySpec> mixture_family(const BernoulliFamilySpec& base);

struct ClippingStats {
    double complement_frequency; // empirical frequency of draws outside [2*gap, 1-2*gap]
    double complement_bound;     // exp(-(1/2 - 2*gap)^2 / (2 sigma2))
    long rounds_sampled;
};
ClippingStats clipping_event_stats(const ClippedGaussianSpec& spec, long rounds_sampled,
                                   RngStream& stream);

} // namespace banditlb::envs
