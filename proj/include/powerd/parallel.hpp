#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace powerd {

// Runs fn(worker, begin, end) on `workers` threads over a static block
// partition of [0, n). Static blocks keep per-worker work assignment (and
// therefore any per-worker accumulation order) independent of scheduling.
inline void parallel_for(int n, int workers,
                         const std::function<void(int worker, int begin, int end)>& fn) {
    if (n <= 0) return;
    if (workers < 1) workers = 1;
    if (workers > n) workers = n;
    if (workers == 1) {
        fn(0, 0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::vector<std::exception_ptr> errs(workers);
    for (int w = 0; w < workers; ++w) {
        int begin = static_cast<int>(static_cast<long long>(n) * w / workers);
        int end = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
        pool.emplace_back([&, w, begin, end] {
            try {
                fn(w, begin, end);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

inline int hardware_workers() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace powerd
