#include "banditlb/info.hpp"

#include <cmath>
#include <limits>

#include "banditlb/errors.hpp"
#include "banditlb/kahan.hpp"

namespace banditlb::info {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// p * log(p/q) under the 0 log 0 = 0 and a/0 = +inf conventions.
double plogratio(double p, double q) {
    if (p == 0.0) return 0.0;
    if (q == 0.0) return kInf;
    return p * std::log(p / q);
}

void check_probability(double value, const char* label) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ArgumentError(std::string(label) + " must lie in [0,1]");
    }
}

} // namespace

void DiscreteLaw::validate() const {
    if (probabilities.empty()) throw ArgumentError("DiscreteLaw: empty support");
    KahanSum total;
    for (double p : probabilities) {
        if (!(p >= 0.0)) throw ArgumentError("DiscreteLaw: negative mass");
        total.add(p);
    }
    if (std::abs(total.value() - 1.0) > 1e-12) {
        throw ArgumentError("DiscreteLaw: probabilities must sum to 1 within 1e-12");
    }
}

double kl_bernoulli(double p, double q) {
    check_probability(p, "kl_bernoulli: p");
    check_probability(q, "kl_bernoulli: q");
    return plogratio(p, q) + plogratio(1.0 - p, 1.0 - q);
}

double chi2_bernoulli(double p, double q) {
    check_probability(p, "chi2_bernoulli: p");
    check_probability(q, "chi2_bernoulli: q");
    if (p == q) return 0.0;
    const double denom = q * (1.0 - q);
    if (denom == 0.0) return kInf;
    const double diff = p - q;
    return diff * diff / denom;
}

double kl_discrete(const DiscreteLaw& p, const DiscreteLaw& q) {
    p.validate();
    q.validate();
    if (p.size() != q.size()) throw StructuralError("kl_discrete: support size mismatch");
    KahanSum total;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double term = plogratio(p.probabilities[i], q.probabilities[i]);
        if (term == kInf) return kInf;
        total.add(term);
    }
    return total.value();
}

double kl_gaussian_shift(double epsilon, double sigma2) {
    if (!(sigma2 > 0.0)) throw ArgumentError("kl_gaussian_shift: sigma2 must be positive");
    return epsilon * epsilon / (2.0 * sigma2);
}

double bretagnolle_huber_bound(double kl) {
    if (!(kl >= 0.0)) throw ArgumentError("bretagnolle_huber_bound: kl must be >= 0");
    return 0.5 * std::exp(-kl);
}

double pinsker_tv_bound(double kl) {
    if (!(kl >= 0.0)) throw ArgumentError("pinsker_tv_bound: kl must be >= 0");
    return std::sqrt(kl / 2.0);
}

double chain_rule_rhs(std::span<const double> expected_counts,
                      std::span<const double> per_arm_kl) {
    if (expected_counts.size() != per_arm_kl.size()) {
        throw StructuralError("chain_rule_rhs: vector lengths differ");
    }
    KahanSum total;
    for (std::size_t i = 0; i < expected_counts.size(); ++i) {
        if (!(expected_counts[i] >= 0.0)) {
            throw ArgumentError("chain_rule_rhs: counts must be >= 0");
        }
        if (!(per_arm_kl[i] >= 0.0)) {
            throw ArgumentError("chain_rule_rhs: divergences must be >= 0");
        }
        if (expected_counts[i] == 0.0) continue;
        const double term = expected_counts[i] * per_arm_kl[i];
        if (term == kInf) return kInf;
        total.add(term);
    }
    return total.value();
}

namespace {

struct OracleAccumulator {
    KahanSum joint_kl;
    std::vector<KahanSum> expected_counts; // under the first law, at round t
    long paths = 0;
    bool infinite = false;
};

// Depth-first walk over histories (I_s, loss bit) for s < round, carrying the
// policy state and both log-probabilities. At the final depth the action draw
// is appended and the KL term P1 * (log P1 - log P2) is accumulated.
void walk(const policies::PolicyState& state, int depth, int round, double logp1,
          double logp2, std::span<const double> law1, std::span<const double> law2,
          std::vector<int>& counts, OracleAccumulator& acc) {
    const int arms = state.config().arms;
    std::vector<double> dist = state.action_distribution();
    if (depth == round - 1) {
        // History complete: record expected pull counts, then the action draw.
        const double p1 = std::exp(logp1);
        for (int i = 0; i < arms; ++i) {
            acc.expected_counts[static_cast<std::size_t>(i)].add(
                p1 * static_cast<double>(counts[static_cast<std::size_t>(i)]));
        }
        for (int a = 0; a < arms; ++a) {
            const double pa = dist[static_cast<std::size_t>(a)];
            if (pa <= 0.0) continue;
            ++acc.paths;
            const double path_logp1 = logp1 + std::log(pa);
            const double path_logp2 = logp2 + std::log(pa);
            const double path_p1 = std::exp(path_logp1);
            if (path_p1 == 0.0) continue;
            if (path_logp2 == -std::numeric_limits<double>::infinity()) {
                acc.infinite = true;
                continue;
            }
            acc.joint_kl.add(path_p1 * (path_logp1 - path_logp2));
        }
        return;
    }
    for (int a = 0; a < arms; ++a) {
        const double pa = dist[static_cast<std::size_t>(a)];
        if (pa <= 0.0) continue;
        const double log_pa = std::log(pa);
        for (int bit = 0; bit <= 1; ++bit) {
            const double q1 = bit ? law1[static_cast<std::size_t>(a)]
                                  : 1.0 - law1[static_cast<std::size_t>(a)];
            const double q2 = bit ? law2[static_cast<std::size_t>(a)]
                                  : 1.0 - law2[static_cast<std::size_t>(a)];
            if (q1 == 0.0 && q2 == 0.0) continue;
            const double child_logp1 =
                (q1 == 0.0) ? -std::numeric_limits<double>::infinity()
                            : logp1 + log_pa + std::log(q1);
            if (child_logp1 == -std::numeric_limits<double>::infinity()) {
                continue; // zero mass under the first law contributes nothing
            }
            const double child_logp2 =
                (q2 == 0.0) ? -std::numeric_limits<double>::infinity()
                            : logp2 + log_pa + std::log(q2);
            policies::PolicyState child = state;
            child.update(a, static_cast<double>(bit));
            ++counts[static_cast<std::size_t>(a)];
            walk(child, depth + 1, round, child_logp1, child_logp2, law1, law2, counts, acc);
            --counts[static_cast<std::size_t>(a)];
        }
    }
}

} // namespace

OracleResult exact_history_kl_oracle(const policies::PolicyConfig& policy,
                                     std::span<const double> law1,
                                     std::span<const double> law2, int round) {
    policy.validate();
    const int arms = policy.arms;
    if (arms > 3 || round > 4) {
        throw CapacityError("exact_history_kl_oracle: instance too large to enumerate");
    }
    if (round < 1) throw ArgumentError("exact_history_kl_oracle: round must be >= 1");
    if (law1.size() != static_cast<std::size_t>(arms) ||
        law2.size() != static_cast<std::size_t>(arms)) {
        throw StructuralError("exact_history_kl_oracle: law size must equal arm count");
    }
    for (double q : law1) check_probability(q, "exact_history_kl_oracle: law1 entry");
    for (double q : law2) check_probability(q, "exact_history_kl_oracle: law2 entry");

    OracleAccumulator acc;
    acc.expected_counts.assign(static_cast<std::size_t>(arms), KahanSum{});
    std::vector<int> counts(static_cast<std::size_t>(arms), 0);
    policies::PolicyState state(policy);
    walk(state, 0, round, 0.0, 0.0, law1, law2, counts, acc);

    std::vector<double> expected(static_cast<std::size_t>(arms));
    std::vector<double> per_arm(static_cast<std::size_t>(arms));
    for (int i = 0; i < arms; ++i) {
        expected[static_cast<std::size_t>(i)] =
            acc.expected_counts[static_cast<std::size_t>(i)].value();
        per_arm[static_cast<std::size_t>(i)] = kl_bernoulli(
            law1[static_cast<std::size_t>(i)], law2[static_cast<std::size_t>(i)]);
    }
    OracleResult result;
    result.joint_kl = acc.infinite ? kInf : acc.joint_kl.value();
    result.chain_rule_value = chain_rule_rhs(expected, per_arm);
    result.paths_enumerated = acc.paths;
    return result;
}

} // namespace banditlb::info
