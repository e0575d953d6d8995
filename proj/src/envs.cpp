#include "banditlb/envs.hpp"

#include <algorithm>
#include <cmath>

#include "banditlb/errors.hpp"

namespace banditlb::envs {

namespace {

inline double clip01(double x) { return std::min(1.0, std::max(0.0, x)); }

} // namespace

ClippedGaussianSpec ClippedGaussianSpec::theorem1(int arms, long rounds, double delta,
                                                  int target_arm) {
    ClippedGaussianSpec spec;
    spec.arms = arms;
    spec.rounds = rounds;
    spec.delta = delta;
    spec.target_arm = target_arm;
    spec.mode = Mode::theorem1;
    spec.gap = std::sqrt(spec.sigma2 * (arms - 1) * std::log(1.0 / (4.0 * delta)) /
                         (2.0 * static_cast<double>(rounds)));
    spec.validate();
    return spec;
}

ClippedGaussianSpec ClippedGaussianSpec::theorem2(int arms, long rounds, double delta,
                                                  double premise_constant, int target_arm) {
    if (!(premise_constant > 0.0)) {
        throw ArgumentError("ClippedGaussianSpec: premise constant must be positive");
    }
    ClippedGaussianSpec spec;
    spec.arms = arms;
    spec.rounds = rounds;
    spec.delta = delta;
    spec.target_arm = target_arm;
    spec.mode = Mode::theorem2;
    spec.premise_constant = premise_constant;
    spec.gap = (7.0 * spec.sigma2 / (16.0 * premise_constant)) *
               std::sqrt((arms - 1) / static_cast<double>(rounds)) *
               std::log(1.0 / (4.0 * delta));
    spec.validate();
    return spec;
}

ClippedGaussianSpec ClippedGaussianSpec::with_gap(int arms, long rounds, double delta,
                                                  double gap, int target_arm) {
    ClippedGaussianSpec spec;
    spec.arms = arms;
    spec.rounds = rounds;
    spec.delta = delta;
    spec.target_arm = target_arm;
    spec.mode = Mode::explicit_gap;
    spec.gap = gap;
    spec.validate();
    return spec;
}

void ClippedGaussianSpec::validate() const {
    if (arms < 2) throw ArgumentError("ClippedGaussianSpec: arms must be >= 2");
    if (rounds < 1) throw ArgumentError("ClippedGaussianSpec: rounds must be >= 1");
    if (!(delta > 0.0 && delta < 0.25)) {
        throw ArgumentError("ClippedGaussianSpec: delta must lie in (0, 1/4)");
    }
    if (target_arm < 0 || target_arm >= arms) {
        throw ArgumentError("ClippedGaussianSpec: target arm out of range");
    }
    if (!(gap >= 0.0 && gap <= 1.0 / 30.0)) {
        throw ArgumentError("ClippedGaussianSpec: gap must lie in [0, 1/30]");
    }
    if (!(sigma2 > 0.0)) throw ArgumentError("ClippedGaussianSpec: sigma2 must be positive");
    if (mode == Mode::theorem2 && !(premise_constant > 0.0)) {
        throw ArgumentError("ClippedGaussianSpec: premise constant must be positive");
    }
}

LossMatrix sample_clipped_gaussian(const ClippedGaussianSpec& spec, RngStream& stream) {
    spec.validate();
    const int arms = spec.arms;
    const double sigma = std::sqrt(spec.sigma2);
    std::vector<double> values(static_cast<std::size_t>(spec.rounds) * arms);
    for (long t = 0; t < spec.rounds; ++t) {
        const double z = stream.next_gaussian(0.5, sigma);
        double* row = values.data() + static_cast<std::size_t>(t) * arms;
        const double base = clip01(z);
        for (int i = 0; i < arms; ++i) row[i] = base;
        row[0] = clip01(z - spec.gap);
        if (spec.target_arm != 0) row[spec.target_arm] = clip01(z - 2.0 * spec.gap);
    }
    return LossMatrix(spec.rounds, arms, std::move(values));
}

double BernoulliFamilySpec::default_epsilon(int arms, long rounds, double alpha) {
    return 0.5 * std::sqrt(alpha * (1.0 - alpha) * arms / static_cast<double>(rounds));
}

BernoulliFamilySpec BernoulliFamilySpec::lemma5(int arms, long rounds, double alpha,
                                                std::optional<int> target_arm) {
    return with_epsilon(arms, rounds, alpha, default_epsilon(arms, rounds, alpha),
                        target_arm);
}

BernoulliFamilySpec BernoulliFamilySpec::with_epsilon(int arms, long rounds, double alpha,
                                                      double epsilon,
                                                      std::optional<int> target_arm) {
    BernoulliFamilySpec spec;
    spec.arms = arms;
    spec.rounds = rounds;
    spec.alpha = alpha;
    spec.epsilon = epsilon;
    spec.target_arm = target_arm;
    spec.validate();
    return spec;
}

void BernoulliFamilySpec::validate() const {
    if (arms < 2) throw ArgumentError("BernoulliFamilySpec: arms must be >= 2");
    if (rounds < 1) throw ArgumentError("BernoulliFamilySpec: rounds must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ArgumentError("BernoulliFamilySpec: alpha must lie in (0,1)");
    }
    if (!(epsilon >= 0.0)) throw ArgumentError("BernoulliFamilySpec: epsilon must be >= 0");
    if (alpha + epsilon > 1.0) {
        throw ArgumentError(
            "BernoulliFamilySpec: alpha + epsilon exceeds 1 (rounds too small for this alpha)");
    }
    if (target_arm && (*target_arm < 0 || *target_arm >= arms)) {
        throw ArgumentError("BernoulliFamilySpec: target arm out of range");
    }
}

LossMatrix sample_bernoulli_family(const BernoulliFamilySpec& spec, RngStream& stream) {
    spec.validate();
    const int arms = spec.arms;
    const double shifted = spec.alpha + spec.epsilon;
    std::vector<double> values(static_cast<std::size_t>(spec.rounds) * arms);
    for (long t = 0; t < spec.rounds; ++t) {
        double* row = values.data() + static_cast<std::size_t>(t) * arms;
        for (int i = 0; i < arms; ++i) {
            const double p = (spec.target_arm && i == *spec.target_arm) ? spec.alpha : shifted;
            row[i] = stream.next_bernoulli(p) ? 1.0 : 0.0;
        }
    }
    return LossMatrix(spec.rounds, arms, std::move(values));
}

std::vector<BernoulliFamilySpec> mixture_family(const BernoulliFamilySpec& base) {
    base.validate();
    std::vector<BernoulliFamilySpec> specs;
    specs.reserve(static_cast<std::size_t>(base.arms));
    for (int j = 0; j < base.arms; ++j) {
        BernoulliFamilySpec spec = base;
        spec.target_arm = j;
        specs.push_back(spec);
    }
    return specs;
}

std::pair<LossMatrix, int> sample_mixture(std::span<const BernoulliFamilySpec> specs,
                                          RngStream& stream) {
    if (specs.empty()) throw ArgumentError("sample_mixture: empty family");
    const BernoulliFamilySpec& first = specs.front();
    first.validate();
    if (specs.size() != static_cast<std::size_t>(first.arms)) {
        throw ArgumentError("sample_mixture: family must contain one spec per arm");
    }
    std::vector<bool> seen(static_cast<std::size_t>(first.arms), false);
    for (const auto& spec : specs) {
        spec.validate();
        if (spec.arms != first.arms || spec.rounds != first.rounds ||
            spec.alpha != first.alpha || spec.epsilon != first.epsilon) {
            throw ArgumentError("sample_mixture: specs differ beyond the target arm");
        }
        if (!spec.target_arm) {
            throw ArgumentError("sample_mixture: null-measure spec not allowed in a mixture");
        }
        if (seen[static_cast<std::size_t>(*spec.target_arm)]) {
            throw ArgumentError("sample_mixture: duplicate target arm");
        }
        seen[static_cast<std::size_t>(*spec.target_arm)] = true;
    }
    const int chosen = static_cast<int>(stream.next_uniform_int(specs.size()));
    return {sample_bernoulli_family(specs[static_cast<std::size_t>(chosen)], stream),
            *specs[static_cast<std::size_t>(chosen)].target_arm};
}

ClippingStats clipping_event_stats(const ClippedGaussianSpec& spec, long rounds_sampled,
                                   RngStream& stream) {
    spec.validate();
    if (rounds_sampled < 1) {
        throw ArgumentError("clipping_event_stats: need at least one round");
    }
    const double sigma = std::sqrt(spec.sigma2);
    const double lo = 2.0 * spec.gap;
    const double hi = 1.0 - 2.0 * spec.gap;
    long outside = 0;
    for (long t = 0; t < rounds_sampled; ++t) {
        const double z = stream.next_gaussian(0.5, sigma);
        if (z < lo || z > hi) ++outside;
    }
    const double margin = 0.5 - 2.0 * spec.gap;
    const double bound = std::exp(-margin * margin / (2.0 * spec.sigma2));
    return {static_cast<double>(outside) / static_cast<double>(rounds_sampled), bound,
            rounds_sampled};
}

} // namespace banditlb::envs
