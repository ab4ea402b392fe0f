#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "covertime/model.hpp"

namespace covertime {

/// Per-element coverage intensities plus the coupon-size moments the
/// structure checkers need. Balanced closed-form models keep a single shared
/// q value instead of materialising the vector (the hypercube ground set can
/// be 2^24 elements).
struct IntensityProfile {
    uint64_t n = 0;
    std::vector<double> q;     // empty when uniform_q holds for all elements
    double q_uniform = -1.0;
    double mu = 0.0;
    double M = 0.0;
    double chi = 0.0;
    double q_star = 0.0;
    bool estimated = false;
    double ci_radius = 0.0;
    uint64_t draws = 0;
    bool balanced = false;
    bool exchangeable = false;
    bool transitive = false;

    bool uniform() const { return q.empty(); }
    double q_at(uint64_t x) const { return uniform() ? q_uniform : q[x]; }
    /// Relative spread max(q)/min(q) - 1 (0 for uniform profiles).
    double balance_spread() const;
};

/// Builds the intensity profile. Closed-form kinds are exact; otherwise the
/// entries are estimated from `draw_budget` seeded draws and the profile is
/// flagged so downstream checkers can widen their verdicts.
IntensityProfile profile(const CouponModel& model, uint64_t draw_budget = 100000,
                         uint64_t seed = 0xC0FFEEull);

/// alpha-power mean of a positive vector; alpha = 0 is the geometric mean.
/// Entries of zero are rejected for alpha <= 0.
double holder_mean(std::span<const double> q, double alpha);
double holder_mean(const IntensityProfile& profile, double alpha);

/// One off-diagonal value class: `ordered_pairs` ordered (x,y) pairs share
/// pair intensity `q`.
struct PairGroup {
    double q = 0.0;
    double ordered_pairs = 0.0;
};

/// Pairwise intensities in one of three shapes: a dense matrix (n <= 4096),
/// a value spectrum with a closed-form lookup (structured models of any
/// size), or sampled estimates with a confidence radius.
struct PairIntensities {
    enum class Mode { ExactDense, ExactSpectrum, Estimated };

    Mode mode = Mode::ExactDense;
    uint64_t n = 0;
    std::vector<double> qxy;  // row-major incl. diagonal q_x (dense/estimated)
    std::vector<double> p00;  // co-absence estimates (estimated mode)
    std::vector<PairGroup> spectrum;
    std::function<double(uint64_t, uint64_t)> lookup;  // exact modes
    uint64_t draws = 0;
    double ci_radius = 0.0;

    bool exact() const { return mode != Mode::Estimated; }
    double q(uint64_t x, uint64_t y) const;
    /// P(x not covered and y not covered) by one coupon.
    double pair_absent(uint64_t x, uint64_t y, const IntensityProfile& prof) const;
    bool has_spectrum() const { return !spectrum.empty(); }
};

inline constexpr uint64_t kDensePairCap = 4096;

/// Builds pair intensities: closed forms where the model has them, otherwise
/// co-occurrence counting over `budget` seeded draws (Wilson CI radius).
PairIntensities pair_intensities(const CouponModel& model, uint64_t budget = 100000,
                                 uint64_t seed = 0xC0FFEEull);

}  // namespace covertime
