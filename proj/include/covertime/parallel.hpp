#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace covertime {

/// Worker count resolution: explicit request > COVERTIME_THREADS > 1.
inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("COVERTIME_THREADS")) {
        const long v = std::atol(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

/// Runs f(i) for i in [begin, end) across `threads` workers using static
/// contiguous chunks. Callers write results into per-index slots, so the
/// outcome is identical for every thread count.
template <class F>
void parallel_for(uint64_t begin, uint64_t end, unsigned threads, F&& f) {
    const uint64_t total = end > begin ? end - begin : 0;
    if (total == 0) return;
    threads = resolve_threads(threads);
    if (threads <= 1 || total == 1) {
        for (uint64_t i = begin; i < end; ++i) f(i);
        return;
    }
    if (threads > total) threads = static_cast<unsigned>(total);
    const uint64_t chunk = (total + threads - 1) / threads;
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        const uint64_t lo = begin + w * chunk;
        const uint64_t hi = lo + chunk < end ? lo + chunk : end;
        if (lo >= hi) break;
        workers.emplace_back([lo, hi, &f] {
            for (uint64_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& t : workers) t.join();
}

}  // namespace covertime
