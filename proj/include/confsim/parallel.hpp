#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace confsim {

// Runs body(shard) for shard = 0..n_shards-1 on up to `workers` threads.
// Shard work must be independent; callers merge per-shard results in shard
// order so outputs do not depend on the worker count.
inline void parallel_shards(int n_shards, int workers, const std::function<void(int)>& body) {
    if (workers <= 1) {
        for (int s = 0; s < n_shards; ++s) body(s);
        return;
    }
    std::atomic<int> next{0};
    auto drain = [&] {
        for (;;) {
            int s = next.fetch_add(1);
            if (s >= n_shards) return;
            body(s);
        }
    };
    std::vector<std::thread> pool;
    int n_threads = std::min(workers, n_shards);
    pool.reserve(static_cast<size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(drain);
    for (auto& th : pool) th.join();
}

}  // namespace confsim
