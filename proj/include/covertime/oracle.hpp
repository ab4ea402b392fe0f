#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "covertime/model.hpp"

namespace covertime {

/// Exact covering-time law up to a truncation point.
struct ExactDistribution {
    std::vector<double> pmf;  // pmf[t] = P(T = t)
    double tail_mass = 0.0;   // P(T > t_max)
    double expected_T = 0.0;
    bool infinite = false;  // some element is never covered

    uint64_t t_max() const { return pmf.empty() ? 0 : pmf.size() - 1; }
    double cdf_at(uint64_t t) const;
    /// Least t with P(T <= t) >= 1/2 (requires the mass to be inside pmf).
    uint64_t median() const;
};

inline constexpr uint64_t kIeElementCap = 20;
inline constexpr uint64_t kChainElementCap = 16;

/// P(C_t = V) by inclusion-exclusion over uncovered subsets (explicit models,
/// n <= 20). Terms are accumulated in descending |A| order with compensated
/// summation; the small-magnitude terms go in first.
double cover_prob_ie(const CouponModel& model, uint64_t t);

/// The same probability for every t in [0, t_max] at O(2^n) per step.
std::vector<double> cover_prob_ie_curve(const CouponModel& model, uint64_t t_max);

/// Exact expected covering time via the alternating-sum closed form.
/// Returns +inf when some element is never covered.
double expected_T_ie(const CouponModel& model);

/// Exact law by advancing the covered-set Markov chain (explicit models,
/// n <= 16). t_max = 0 lets the routine choose a horizon from q_star.
ExactDistribution chain_distribution(const CouponModel& model, uint64_t t_max = 0);

/// Exact law for an exchangeable model given its coupon-size distribution;
/// the covered-set chain collapses to the covered count. t_max = 0 extends
/// until the captured mass reaches 1 - 1e-13.
ExactDistribution exchangeable_exact(uint64_t n,
                                     const std::vector<std::pair<uint64_t, double>>& size_law,
                                     uint64_t t_max = 0);

/// P(C_t = V) for the k-uniform exchangeable collector at any n, via the
/// uncovered-set inclusion-exclusion series. Independent of the DP above.
double exchangeable_cover_prob_ie(uint64_t n, uint64_t k, uint64_t t);

}  // namespace covertime
