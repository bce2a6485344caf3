// Minimal deterministic fork-join helper for embarrassingly parallel grid
// scans. Thread count is capped by the CDSPHERE_THREADS environment variable;
// per-chunk results are merged in chunk order so reductions stay reproducible
// regardless of scheduling.
#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace cdsphere {

inline unsigned thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("CDSPHERE_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
    }
    return hw;
}

// Runs body(chunk_index, begin, end) over [0, count) split into contiguous
// chunks, one per worker. Chunk boundaries depend only on (count, workers).
template <class Body>
void parallel_chunks(std::size_t count, const Body& body) {
    unsigned workers = thread_budget();
    if (count < 1024 || workers == 1) {
        body(0, std::size_t{0}, count);
        return;
    }
    if (workers > count) workers = static_cast<unsigned>(count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t per = (count + workers - 1) / workers;
    for (unsigned c = 0; c < workers; ++c) {
        const std::size_t lo = c * per;
        const std::size_t hi = std::min(count, lo + per);
        if (lo >= hi) break;
        pool.emplace_back([&body, c, lo, hi] { body(c, lo, hi); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace cdsphere
