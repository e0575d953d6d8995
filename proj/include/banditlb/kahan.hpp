#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace banditlb {

// Neumaier-compensated accumulator. Keeps >= 10 significant digits over 1e6
// additions of [0,1] terms, which plain left-to-right summation does not
// guarantee at the tolerances used by the verification suites.
class KahanSum {
public:
    KahanSum() = default;
    explicit KahanSum(double initial) : sum_(initial) {}

    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    KahanSum& operator+=(double x) {
        add(x);
        return *this;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
    KahanSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

} // namespace banditlb
