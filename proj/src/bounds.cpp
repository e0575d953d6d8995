#include "banditlb/bounds.hpp"

#include <cmath>
#include <cstdio>

namespace banditlb::bounds {

namespace {

double require(const std::optional<double>& value, const char* name) {
    if (!value) {
        throw ArgumentError(std::string("evaluate_bound: missing parameter ") + name);
    }
    return *value;
}

void add_check(HypothesisReport& report, std::string condition, bool satisfied) {
    report.ok = report.ok && satisfied;
    report.checks.push_back({std::move(condition), satisfied});
}

std::string fmt(const char* pattern, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b);
    return buf;
}

} // namespace

const char* bound_name(BoundKind kind) {
    switch (kind) {
        case BoundKind::eq1_upper: return "eq1_upper";
        case BoundKind::eq2_upper: return "eq2_upper";
        case BoundKind::eq3_first_order_upper: return "eq3_first_order_upper";
        case BoundKind::eq7_hazan_kale_upper: return "eq7_hazan_kale_upper";
        case BoundKind::thm1_lower: return "thm1_lower";
        case BoundKind::thm2_lower: return "thm2_lower";
        case BoundKind::thm4_lower: return "thm4_lower";
        case BoundKind::thm6_lower: return "thm6_lower";
        case BoundKind::cor7_lower: return "cor7_lower";
        case BoundKind::cor8_lower: return "cor8_lower";
        case BoundKind::lemma5_lower: return "lemma5_lower";
    }
    return "unknown";
}

std::optional<BoundKind> bound_from_string(const std::string& name) {
    for (BoundKind kind : all_bounds()) {
        if (name == bound_name(kind)) return kind;
    }
    return std::nullopt;
}

std::vector<BoundKind> all_bounds() {
    return {BoundKind::eq1_upper,  BoundKind::eq2_upper,  BoundKind::eq3_first_order_upper,
            BoundKind::eq7_hazan_kale_upper, BoundKind::thm1_lower, BoundKind::thm2_lower,
            BoundKind::thm4_lower, BoundKind::thm6_lower, BoundKind::cor7_lower,
            BoundKind::cor8_lower, BoundKind::lemma5_lower};
}

double second_order_log_constant() {
    const double root5 = std::sqrt(5.0);
    const double factor = (4.0 / 9.0) * (3.0 * root5 + 1.0);
    return factor * factor;
}

double first_order_alpha_floor(int arms, long rounds) {
    const double t = static_cast<double>(rounds);
    return std::max(kFirstOrderLogConstant * std::log(32.0 * t), arms / 2.0) / t;
}

double second_order_alpha_floor(int arms, long rounds) {
    const double t = static_cast<double>(rounds);
    return std::max(2.0 * second_order_log_constant() * std::log(t), 8.0 * arms) / t;
}

std::string HypothesisReport::violated() const {
    std::string out;
    for (const auto& check : checks) {
        if (check.satisfied) continue;
        if (!out.empty()) out += "; ";
        out += check.condition;
    }
    return out;
}

HypothesisReport validate_hypotheses(const BoundQuery& query) {
    HypothesisReport report;
    const double t = static_cast<double>(query.rounds);
    const double k = static_cast<double>(query.arms);
    add_check(report, "K >= 2", query.arms >= 2);
    add_check(report, "T >= 1", query.rounds >= 1);
    if (!report.ok) return report;

    switch (query.kind) {
        case BoundKind::eq1_upper:
        case BoundKind::eq2_upper: {
            const double delta = require(query.delta, "delta");
            add_check(report, "delta in (0,1)", delta > 0.0 && delta < 1.0);
            break;
        }
        case BoundKind::eq3_first_order_upper: {
            const double best = require(query.best_cumulative, "L_star");
            add_check(report, "L_star >= 0", best >= 0.0);
            add_check(report, "L_star <= T", best <= t);
            break;
        }
        case BoundKind::eq7_hazan_kale_upper: {
            const double q = require(query.quadratic_variation, "Q_T");
            add_check(report, "T >= 2", query.rounds >= 2);
            add_check(report, "Q_T >= 0", q >= 0.0);
            add_check(report, "Q_T <= TK/4", q <= t * k / 4.0);
            break;
        }
        case BoundKind::thm1_lower: {
            const double delta = require(query.delta, "delta");
            add_check(report, "delta in (0,1/4)", delta > 0.0 && delta < 0.25);
            if (delta > 0.0 && delta < 1.0) {
                const double floor = 32.0 * (k - 1.0) * std::log(2.0 / delta);
                add_check(report, fmt("T >= 32(K-1)log(2/delta) = %.6g (T = %.6g)", floor, t),
                          t >= floor);
            }
            break;
        }
        case BoundKind::thm2_lower: {
            const double delta = require(query.delta, "delta");
            const double c = require(query.premise_constant, "C");
            add_check(report, "delta in (0,1/4)", delta > 0.0 && delta < 0.25);
            add_check(report, "C > 0", c > 0.0);
            if (delta > 0.0 && delta < 0.25 && c > 0.0) {
                const double lhs = std::sqrt((k - 1.0) / t) * std::log(1.0 / (4.0 * delta));
                add_check(report,
                          fmt("sqrt((K-1)/T)log(1/(4delta)) = %.6g <= C = %.6g", lhs, c),
                          lhs <= c);
                const double floor = 32.0 * std::log(2.0 / delta);
                add_check(report, fmt("T >= 32log(2/delta) = %.6g (T = %.6g)", floor, t),
                          t >= floor);
            }
            break;
        }
        case BoundKind::thm4_lower: {
            const double alpha = require(query.alpha, "alpha");
            const double t_floor = std::max(k, 118.0);
            add_check(report, fmt("T >= max(K, 118) = %.6g (T = %.6g)", t_floor, t),
                      t >= t_floor);
            const double alpha_floor = first_order_alpha_floor(query.arms, query.rounds);
            add_check(report,
                      fmt("alpha >= max((64/9)log(32T), K/2)/T = %.6g (alpha = %.6g)",
                          alpha_floor, alpha),
                      alpha >= alpha_floor);
            add_check(report, "alpha <= 1/2", alpha <= 0.5);
            if (alpha_floor > 0.5) {
                add_check(report, "admissible alpha interval non-empty", false);
            }
            break;
        }
        case BoundKind::thm6_lower: {
            const double alpha = require(query.alpha, "alpha");
            const double t_floor = std::max(32.0 * k, 601.0);
            add_check(report, fmt("T >= max(32K, 601) = %.6g (T = %.6g)", t_floor, t),
                      t >= t_floor);
            const double alpha_floor = second_order_alpha_floor(query.arms, query.rounds);
            add_check(report,
                      fmt("alpha >= max(2c1 log(T), 8K)/T = %.6g (alpha = %.6g)", alpha_floor,
                          alpha),
                      alpha >= alpha_floor);
            add_check(report, "alpha <= 1/4", alpha <= 0.25);
            if (alpha_floor > 0.25) {
                add_check(report, "admissible alpha interval non-empty", false);
            }
            break;
        }
        case BoundKind::cor7_lower: {
            const double rho = require(query.rho, "rho");
            const double floor = 32.0 * (k - 1.0) * std::log(14.0);
            add_check(report, fmt("T >= 32(K-1)log(14) = %.6g (T = %.6g)", floor, t),
                      t >= floor);
            const double rho_floor = 0.22 * std::sqrt((k - 1.0) / t);
            add_check(report,
                      fmt("rho >= 0.22 sqrt((K-1)/T) = %.6g (rho = %.6g)", rho_floor, rho),
                      rho >= rho_floor);
            break;
        }
        case BoundKind::cor8_lower: {
            const double floor = 32.0 * (k - 1.0) * std::log(14.0);
            add_check(report, fmt("T >= 32(K-1)log(14) = %.6g (T = %.6g)", floor, t),
                      t >= floor);
            break;
        }
        case BoundKind::lemma5_lower: {
            const double alpha = require(query.alpha, "alpha");
            add_check(report, "alpha in (0,1)", alpha > 0.0 && alpha < 1.0);
            if (alpha > 0.0 && alpha < 1.0) {
                const double floor = k / (4.0 * (1.0 - alpha));
                add_check(report, fmt("T >= K/(4(1-alpha)) = %.6g (T = %.6g)", floor, t),
                          t >= floor);
            }
            break;
        }
    }
    return report;
}

double evaluate_bound(const BoundQuery& query, bool override_hypotheses) {
    HypothesisReport report = validate_hypotheses(query);
    if (!report.ok && !override_hypotheses) throw HypothesisError(std::move(report));

    const double t = static_cast<double>(query.rounds);
    const double k = static_cast<double>(query.arms);
    const double scale = query.scale.value_or(1.0);

    switch (query.kind) {
        case BoundKind::eq1_upper: {
            const double delta = require(query.delta, "delta");
            return scale * std::sqrt(k * t * std::log(k / delta));
        }
        case BoundKind::eq2_upper: {
            const double delta = require(query.delta, "delta");
            const double log_k = std::log(k);
            return scale * std::sqrt(k * t) *
                   (std::sqrt(log_k) + std::log(1.0 / delta) / std::sqrt(log_k));
        }
        case BoundKind::eq3_first_order_upper: {
            const double best = require(query.best_cumulative, "L_star");
            return scale * (std::sqrt(best * k * std::log(k)) + k * std::log(k * t));
        }
        case BoundKind::eq7_hazan_kale_upper: {
            const double q = require(query.quadratic_variation, "Q_T");
            const double log_t = std::log(t);
            return scale * (k * k * std::sqrt(q * log_t) +
                            std::pow(k, 1.5) * log_t * log_t + std::pow(k, 2.5) * log_t);
        }
        case BoundKind::thm1_lower: {
            const double delta = require(query.delta, "delta");
            return std::sqrt((k - 1.0) * t * std::log(1.0 / (4.0 * delta))) / 27.0;
        }
        case BoundKind::thm2_lower: {
            const double delta = require(query.delta, "delta");
            const double c = require(query.premise_constant, "C");
            return std::sqrt((k - 1.0) * t) * std::log(1.0 / (4.0 * delta)) / (203.0 * c);
        }
        case BoundKind::thm4_lower: {
            const double alpha = require(query.alpha, "alpha");
            return std::sqrt(alpha * t * k) / 27.0;
        }
        case BoundKind::thm6_lower: {
            const double alpha = require(query.alpha, "alpha");
            return std::sqrt(alpha * t * k) / 25.0;
        }
        case BoundKind::cor7_lower:
        case BoundKind::cor8_lower:
            return std::sqrt(t * (k - 1.0)) / 504.0;
        case BoundKind::lemma5_lower: {
            const double alpha = require(query.alpha, "alpha");
            return std::sqrt(alpha * (1.0 - alpha) * t * k) / 8.0;
        }
    }
    throw ArgumentError("evaluate_bound: unknown bound kind");
}

} // namespace banditlb::bounds
