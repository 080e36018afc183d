#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace hvf {

/// Worker count for grid scans, from HVF_THREADS (default 1).
inline int env_thread_count() {
    if (const char* s = std::getenv("HVF_THREADS")) {
        int n = std::atoi(s);
        if (n > 0) return n;
    }
    return 1;
}

/// Index-parallel loop; the body writes into preallocated per-index slots so
/// results are identical for any worker count.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
    int workers = env_thread_count();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) body(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace hvf
