#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace covertime {

/// Neumaier-compensated accumulator; the alternating and exponential sums in
/// this codebase span many orders of magnitude.
class KahanSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double log_binomial(double n, double k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double binomial(double n, double k) {
    if (k < 0 || k > n) return 0.0;
    return std::exp(log_binomial(n, k));
}

/// Wilson score interval half-width for s successes out of t trials.
inline double wilson_radius(double s, double t, double z = 2.5758293035489004) {
    if (t <= 0) return 1.0;
    const double p = s / t;
    const double z2 = z * z;
    return z / (1.0 + z2 / t) * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t));
}

inline double wilson_lower(double s, double t, double z = 2.5758293035489004) {
    if (t <= 0) return 0.0;
    const double p = s / t;
    const double z2 = z * z;
    const double centre = (p + z2 / (2.0 * t)) / (1.0 + z2 / t);
    return centre - wilson_radius(s, t, z);
}

inline double wilson_upper(double s, double t, double z = 2.5758293035489004) {
    if (t <= 0) return 1.0;
    const double p = s / t;
    const double z2 = z * z;
    const double centre = (p + z2 / (2.0 * t)) / (1.0 + z2 / t);
    return centre + wilson_radius(s, t, z);
}

/// log(sum exp(v_i)) with the usual max shift.
inline double log_sum_exp(std::span<const double> v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    KahanSum s;
    for (double x : v) s.add(std::exp(x - m));
    return m + std::log(s.value());
}

}  // namespace covertime
