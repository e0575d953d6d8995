#pragma once

#include <optional>
#include <string>
#include <vector>

#include "banditlb/errors.hpp"

namespace banditlb::bounds {

enum class BoundKind {
    eq1_upper,
    eq2_upper,
    eq3_first_order_upper,
    eq7_hazan_kale_upper,
    thm1_lower,
    thm2_lower,
    thm4_lower,
    thm6_lower,
    cor7_lower,
    cor8_lower,
    lemma5_lower,
};

const char* bound_name(BoundKind kind);
std::optional<BoundKind> bound_from_string(const std::string& name);
std::vector<BoundKind> all_bounds();

// Hypothesis constant of the first-order lower bound.
inline constexpr double kFirstOrderLogConstant = 64.0 / 9.0;
// Hypothesis constant of the second-order lower bound: (4/9)^2 (3 sqrt(5)+1)^2.
double second_order_log_constant();

struct BoundQuery {
    BoundKind kind = BoundKind::thm1_lower;
    int arms = 0;
    long rounds = 0;
    std::optional<double> delta;
    std::optional<double> alpha;
    std::optional<double> premise_constant; // C in the uniform high-probability bound
    std::optional<double> rho;              // range width for the range-restricted bound
    std::optional<double> scale;            // unspecified universal constant c, default 1
    std::optional<double> best_cumulative;  // L*_T input of the first-order curve
    std::optional<double> quadratic_variation; // Q_T input of the second-order curve
};

struct HypothesisCheck {
    std::string condition;
    bool satisfied;
};

struct HypothesisReport {
    bool ok = true;
    std::vector<HypothesisCheck> checks;

    // Semicolon-joined descriptions of the failed conditions.
    std::string violated() const;
};

struct HypothesisError : std::runtime_error {
    HypothesisReport report;
    explicit HypothesisError(HypothesisReport r)
        : std::runtime_error("bound hypotheses violated: " + r.violated()),
          report(std::move(r)) {}
};

// Evaluates every inequality in the chosen bound's statement individually.
HypothesisReport validate_hypotheses(const BoundQuery& query);

// Closed-form value of the bound; natural logarithms throughout. Throws
// HypothesisError when the hypotheses fail, unless override_hypotheses is set.
double evaluate_bound(const BoundQuery& query, bool override_hypotheses = false);

// Smallest alpha admitted by the first-order (thm4) or second-order (thm6)
// hypotheses at the given dimensions.
double first_order_alpha_floor(int arms, long rounds);
double second_order_alpha_floor(int arms, long rounds);

} // namespace banditlb::bounds
