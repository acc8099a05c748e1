#pragma once

#include <algorithm>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace sctk {

/** Number of worker threads to use; 0 requests hardware concurrency. */
inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/**
 * Run fn(chunk_index, begin, end) over [0, n) split into contiguous chunks,
 * one chunk per worker.  Callers collect per-chunk results indexed by
 * chunk_index and merge them in order, which keeps outputs deterministic
 * regardless of the thread count.
 */
template <class F>
void parallel_chunks(std::size_t n, unsigned threads, F&& fn) {
    threads = resolve_threads(threads);
    if (n == 0) return;
    std::size_t nchunks = std::min<std::size_t>(threads, n);
    std::size_t per = (n + nchunks - 1) / nchunks;
    if (nchunks == 1) {
        fn(std::size_t{0}, std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nchunks);
    for (std::size_t c = 0; c < nchunks; ++c) {
        std::size_t b = c * per, e = std::min(n, b + per);
        if (b >= e) break;
        pool.emplace_back([&fn, c, b, e] { fn(c, b, e); });
    }
    for (auto& t : pool) t.join();
}

/** printf-style helper; all floating-point output goes through here. */
inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
}

} // namespace sctk
