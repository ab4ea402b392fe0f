#include "covertime/intensity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

#include "covertime/numeric.hpp"

namespace covertime {

double IntensityProfile::balance_spread() const {
    if (uniform()) return 0.0;
    double lo = q[0], hi = q[0];
    for (double v : q) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo - 1.0;
}

IntensityProfile profile(const CouponModel& model, uint64_t draw_budget, uint64_t seed) {
    IntensityProfile p;
    p.n = model.n();
    p.mu = model.mu();
    p.M = model.max_size();
    p.chi = model.chi();
    p.balanced = model.balanced();
    p.exchangeable = model.exchangeable();
    p.transitive = model.transitive();

    const ModelKind kind = model.kind();
    const bool closed_form = !(kind == ModelKind::SpanningTree && model.intensities_estimated());
    if (closed_form) {
        if (model.balanced()) {
            p.q_uniform = model.element_prob(0);
            p.q_star = p.q_uniform;
        } else {
            p.q.resize(p.n);
            for (uint64_t x = 0; x < p.n; ++x) p.q[x] = model.element_prob(x);
            p.q_star = *std::min_element(p.q.begin(), p.q.end());
        }
        return p;
    }

    // Sampling fallback - currently only irregular spanning-tree models.
    if (draw_budget == 0) throw std::invalid_argument("profile: zero draw budget");
    RngStream rng(mix_seed(seed, 0x51u));
    Sampler sampler(model);
    std::vector<uint64_t> hits(p.n, 0);
    for (uint64_t i = 0; i < draw_budget; ++i)
        for (uint32_t x : sampler.draw(rng)) ++hits[x];
    p.q.resize(p.n);
    double max_ci = 0.0;
    for (uint64_t x = 0; x < p.n; ++x) {
        p.q[x] = static_cast<double>(hits[x]) / static_cast<double>(draw_budget);
        max_ci = std::max(max_ci, wilson_radius(static_cast<double>(hits[x]),
                                                static_cast<double>(draw_budget)));
    }
    p.q_star = *std::min_element(p.q.begin(), p.q.end());
    p.estimated = true;
    p.ci_radius = max_ci;
    p.draws = draw_budget;
    return p;
}

double holder_mean(std::span<const double> q, double alpha) {
    if (q.empty()) throw std::invalid_argument("holder_mean: empty vector");
    const double n = static_cast<double>(q.size());
    if (alpha <= 0.0)
        for (double v : q)
            if (v <= 0.0)
                throw std::domain_error("holder_mean: nonpositive entry with alpha <= 0");
    if (alpha == 0.0) {
        KahanSum s;
        for (double v : q) s.add(std::log(v));
        return std::exp(s.value() / n);
    }
    // log-domain power mean; exponents up to |alpha|=64 stay well-conditioned.
    double m = -std::numeric_limits<double>::infinity();
    std::vector<double> logs;
    logs.reserve(q.size());
    for (double v : q) {
        if (v < 0.0) throw std::domain_error("holder_mean: negative entry");
        if (v == 0.0) {
            logs.push_back(-std::numeric_limits<double>::infinity());
            continue;
        }
        logs.push_back(alpha * std::log(v));
    }
    for (double lv : logs) m = std::max(m, lv);
    if (!std::isfinite(m)) return 0.0;  // all entries zero, alpha > 0
    KahanSum s;
    for (double lv : logs) s.add(std::isfinite(lv) ? std::exp(lv - m) : 0.0);
    const double log_mean = m + std::log(s.value()) - std::log(n);
    return std::exp(log_mean / alpha);
}

double holder_mean(const IntensityProfile& prof, double alpha) {
    if (prof.uniform()) {
        if (prof.q_uniform <= 0.0 && alpha <= 0.0)
            throw std::domain_error("holder_mean: nonpositive entry with alpha <= 0");
        return prof.q_uniform;
    }
    return holder_mean(std::span<const double>(prof.q), alpha);
}

double PairIntensities::q(uint64_t x, uint64_t y) const {
    if (x >= n || y >= n) throw std::out_of_range("PairIntensities::q");
    if (!qxy.empty()) return qxy[x * n + y];
    if (lookup) return lookup(x, y);
    throw std::logic_error("PairIntensities: no value access available");
}

double PairIntensities::pair_absent(uint64_t x, uint64_t y,
                                    const IntensityProfile& prof) const {
    if (mode == Mode::Estimated && !p00.empty()) return p00[x * n + y];
    return 1.0 - prof.q_at(x) - prof.q_at(y) + q(x, y);
}

namespace {

std::vector<PairGroup> spectrum_from_dense(const std::vector<double>& qxy, uint64_t n) {
    std::map<double, double> groups;
    for (uint64_t x = 0; x < n; ++x)
        for (uint64_t y = 0; y < n; ++y)
            if (x != y) groups[qxy[x * n + y]] += 1.0;
    std::vector<PairGroup> out;
    out.reserve(groups.size());
    for (auto [v, c] : groups) out.push_back({v, c});
    return out;
}

PairIntensities closed_form_pairs(const CouponModel& model) {
    PairIntensities pi;
    pi.n = model.n();
    pi.lookup = [m = model](uint64_t x, uint64_t y) {
        if (x == y) return m.element_prob(x);
        return *m.pair_prob(x, y);
    };
    const uint64_t n = model.n();
    const double nd = static_cast<double>(n);
    switch (model.kind()) {
        case ModelKind::KUniform: {
            const double kd = static_cast<double>(model.k_param());
            pi.spectrum = {{kd * (kd - 1.0) / (nd * (nd - 1.0)), nd * (nd - 1.0)}};
            break;
        }
        case ModelKind::Lottery:
            pi.spectrum = {{model.lottery_p(), nd * (nd - 1.0)}};
            break;
        case ModelKind::BlockPartition: {
            const double k = static_cast<double>(model.block_size());
            const double nb = static_cast<double>(model.num_blocks());
            pi.spectrum = {{0.0, nd * (nd - k)}, {1.0 / nb, nd * (k - 1.0)}};
            break;
        }
        case ModelKind::HypercubeSubcube: {
            const uint32_t d = model.cube_dim();
            const uint64_t k = model.k_param();
            for (uint32_t i = 1; i <= d; ++i) {
                const double pairs = nd * binomial(d, i);
                double q = 0.0;
                if (i <= d - k)
                    q = std::exp(log_binomial(d - i, static_cast<double>(k)) -
                                 log_binomial(d, static_cast<double>(k)) -
                                 static_cast<double>(k) * std::log(2.0));
                pi.spectrum.push_back({q, pairs});
            }
            break;
        }
        default: break;  // spectrum derived from the dense matrix below
    }
    if (n <= kDensePairCap) {
        pi.mode = PairIntensities::Mode::ExactDense;
        pi.qxy.resize(n * n);
        for (uint64_t x = 0; x < n; ++x) {
            pi.qxy[x * n + x] = model.element_prob(x);
            for (uint64_t y = x + 1; y < n; ++y) {
                const double v = *model.pair_prob(x, y);
                pi.qxy[x * n + y] = v;
                pi.qxy[y * n + x] = v;
            }
        }
        if (pi.spectrum.empty()) pi.spectrum = spectrum_from_dense(pi.qxy, n);
    } else {
        pi.mode = PairIntensities::Mode::ExactSpectrum;
        if (pi.spectrum.empty())
            throw std::invalid_argument(
                "pair_intensities: dense mode refused above the size cap and no "
                "structured spectrum is available for this model");
    }
    return pi;
}

PairIntensities estimated_pairs(const CouponModel& model, uint64_t budget, uint64_t seed) {
    const uint64_t n = model.n();
    if (n > kDensePairCap)
        throw std::invalid_argument("pair_intensities: dense mode refused above the size cap");
    if (budget == 0) throw std::invalid_argument("pair_intensities: zero budget");
    PairIntensities pi;
    pi.mode = PairIntensities::Mode::Estimated;
    pi.n = n;
    pi.draws = budget;
    RngStream rng(mix_seed(seed, 0x5052ull));
    Sampler sampler(model);
    std::vector<uint64_t> single(n, 0);
    std::vector<uint64_t> pair_counts(n * n, 0);
    // Count co-occurrences when coupons are sparse, co-absences when dense;
    // the two are linked by inclusion-exclusion on empirical counts.
    const bool count_present = model.mu() <= static_cast<double>(n) / 2.0;
    std::vector<uint32_t> complement;
    std::vector<uint8_t> in_coupon(n, 0);
    for (uint64_t i = 0; i < budget; ++i) {
        const auto& members = sampler.draw(rng);
        for (uint32_t x : members) ++single[x];
        if (count_present) {
            for (size_t a = 0; a < members.size(); ++a)
                for (size_t b = 0; b < members.size(); ++b)
                    ++pair_counts[static_cast<uint64_t>(members[a]) * n + members[b]];
        } else {
            for (uint32_t x : members) in_coupon[x] = 1;
            complement.clear();
            for (uint32_t x = 0; x < n; ++x)
                if (!in_coupon[x]) complement.push_back(x);
            for (uint32_t x : members) in_coupon[x] = 0;
            for (size_t a = 0; a < complement.size(); ++a)
                for (size_t b = 0; b < complement.size(); ++b)
                    ++pair_counts[static_cast<uint64_t>(complement[a]) * n + complement[b]];
        }
    }
    const double B = static_cast<double>(budget);
    pi.qxy.resize(n * n);
    pi.p00.resize(n * n);
    double max_ci = 0.0;
    for (uint64_t x = 0; x < n; ++x) {
        const double qx = static_cast<double>(single[x]) / B;
        for (uint64_t y = 0; y < n; ++y) {
            const double qy = static_cast<double>(single[y]) / B;
            const double counted = static_cast<double>(pair_counts[x * n + y]) / B;
            double q_pair, p_absent;
            if (count_present) {
                q_pair = counted;
                p_absent = 1.0 - qx - qy + counted;
            } else {
                p_absent = counted;
                q_pair = counted - 1.0 + qx + qy;
            }
            if (x == y) {
                q_pair = qx;
                p_absent = 1.0 - qx;
            }
            pi.qxy[x * n + y] = q_pair;
            pi.p00[x * n + y] = p_absent;
            max_ci = std::max(max_ci, wilson_radius(static_cast<double>(pair_counts[x * n + y]), B));
        }
    }
    pi.ci_radius = max_ci;
    return pi;
}

}  // namespace

PairIntensities pair_intensities(const CouponModel& model, uint64_t budget, uint64_t seed) {
    const bool closed = model.kind() != ModelKind::SpanningTree;
    if (closed) return closed_form_pairs(model);
    return estimated_pairs(model, budget, seed);
}

}  // namespace covertime
