#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace btq {

// Runs fn(i) for i in [0, n) across up to `workers` threads (0 = all
// hardware threads). Work items must be independent; results should be
// written to preallocated slots so the outcome is deterministic.
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn)
{
    if (workers <= 0) workers = int(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min(workers, n);
    if (workers <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < n; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace btq
