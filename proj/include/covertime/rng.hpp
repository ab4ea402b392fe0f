#pragma once

#include <cmath>
#include <cstdint>

namespace covertime {

/// SplitMix64 step. Used both as a standalone mixer and to seed streams.
inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Stateless mix of two 64-bit values into one. Stable across platforms;
/// replay files depend on this mapping staying fixed.
inline uint64_t mix_seed(uint64_t a, uint64_t b) {
    uint64_t s = a ^ (0x9E3779B97F4A7C15ull * (b + 0x632BE59BD9B4E019ull));
    uint64_t r = splitmix64(s);
    return r ^ splitmix64(s);
}

/// xoshiro256** with hand-rolled distributions so that results are
/// bit-reproducible independently of the standard library in use.
class RngStream {
  public:
    explicit RngStream(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    /// Stream for replicate r of an experiment with the given master seed.
    static RngStream for_replicate(uint64_t master_seed, uint64_t replicate) {
        return RngStream(mix_seed(master_seed, replicate));
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 bits of entropy.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Unbiased integer in [0, bound) (Lemire rejection).
    uint64_t uniform_below(uint64_t bound) {
        uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        uint64_t lo = static_cast<uint64_t>(m);
        if (lo < bound) {
            const uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * bound;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    bool bernoulli(double p) { return next_double() < p; }

    double next_exp() { return -std::log1p(-next_double()); }

    /// Poisson draw by inversion, chunked through additivity so the running
    /// product never underflows for large lambda.
    uint64_t poisson(double lambda) {
        uint64_t total = 0;
        while (lambda > 32.0) {
            total += poisson_small(32.0);
            lambda -= 32.0;
        }
        return total + poisson_small(lambda);
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t poisson_small(double lambda) {
        if (lambda <= 0.0) return 0;
        const double limit = std::exp(-lambda);
        uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= next_double();
        } while (p > limit);
        return k - 1;
    }

    uint64_t s_[4];
};

}  // namespace covertime
