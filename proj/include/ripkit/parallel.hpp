#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace ripkit {

// Worker cap from RIPKIT_THREADS; 0 or unset means hardware concurrency.
std::size_t worker_count();

// Splits [0, n) into contiguous chunks whose boundaries depend only on n,
// never on the worker count, so reductions folded in chunk order are
// deterministic. chunk_fn(begin, end) maps a chunk; combine folds results
// left to right.
template <typename R, typename ChunkFn, typename CombineFn>
R parallel_chunk_reduce(std::size_t n, R init, ChunkFn chunk_fn,
                        CombineFn combine) {
    if (n == 0) return init;
    const std::size_t chunk_count = n < 64 ? n : 64;
    const std::size_t workers =
        std::min(worker_count(), chunk_count) > 0
            ? std::min(worker_count(), chunk_count)
            : 1;

    std::vector<R> results(chunk_count, init);
    auto bounds = [&](std::size_t c) {
        const std::size_t lo = n * c / chunk_count;
        const std::size_t hi = n * (c + 1) / chunk_count;
        return std::pair<std::size_t, std::size_t>{lo, hi};
    };

    if (workers <= 1) {
        for (std::size_t c = 0; c < chunk_count; ++c) {
            auto [lo, hi] = bounds(c);
            results[c] = chunk_fn(lo, hi);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t c = next.fetch_add(1);
                    if (c >= chunk_count) return;
                    auto [lo, hi] = bounds(c);
                    results[c] = chunk_fn(lo, hi);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    R acc = init;
    for (std::size_t c = 0; c < chunk_count; ++c) acc = combine(acc, results[c]);
    return acc;
}

} // namespace ripkit
