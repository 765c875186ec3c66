#pragma once

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace af {

// Worker count: AFFINE_FRAMES_THREADS, else hardware concurrency (capped).
inline int default_thread_count() {
    if (const char* env = std::getenv("AFFINE_FRAMES_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return std::min(v, 64);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return std::max(1, std::min<int>(static_cast<int>(hw ? hw : 1), 16));
}

// Deterministic index-parallel map: fn(i) runs once for each i in [0, n), each
// index writes only its own slot, so results are byte-identical for any thread
// count.  Contiguous chunking keeps per-thread work predictable.
template <typename F>
void parallel_for(std::size_t n, int threads, F&& fn) {
    if (n == 0) return;
    std::size_t workers = std::min<std::size_t>(std::max(threads, 1), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t lo = n * w / workers;
        std::size_t hi = n * (w + 1) / workers;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace af
