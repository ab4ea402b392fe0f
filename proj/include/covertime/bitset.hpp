#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace covertime {

/// Fixed-capacity bit vector over [0, n). The covering loops only ever need
/// set / test / clear, so nothing fancier lives here.
class Bitset {
  public:
    Bitset() = default;
    explicit Bitset(uint64_t n) : n_(n), words_((n + 63) / 64, 0ull) {}

    uint64_t size() const { return n_; }

    bool test(uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1ull; }

    void set(uint64_t i) { words_[i >> 6] |= 1ull << (i & 63); }

    /// Sets bit i; returns true when it was previously clear.
    bool set_if_unset(uint64_t i) {
        uint64_t& w = words_[i >> 6];
        const uint64_t mask = 1ull << (i & 63);
        if (w & mask) return false;
        w |= mask;
        return true;
    }

    void clear(uint64_t i) { words_[i >> 6] &= ~(1ull << (i & 63)); }

    void reset_all() { std::fill(words_.begin(), words_.end(), 0ull); }

    uint64_t count() const {
        uint64_t c = 0;
        for (uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    /// Indices of set bits, ascending.
    std::vector<uint32_t> members() const {
        std::vector<uint32_t> out;
        for (uint64_t wi = 0; wi < words_.size(); ++wi) {
            uint64_t w = words_[wi];
            while (w) {
                out.push_back(static_cast<uint32_t>(wi * 64 + std::countr_zero(w)));
                w &= w - 1;
            }
        }
        return out;
    }

  private:
    uint64_t n_ = 0;
    std::vector<uint64_t> words_;
};

}  // namespace covertime
