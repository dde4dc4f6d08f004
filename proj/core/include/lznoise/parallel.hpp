#pragma once

#include <atomic>
#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace lzn {

// Sums in a fixed binary-tree order, so the result does not depend on how
// work was distributed across threads.
inline double pairwise_sum(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n <= 8) {
        double s = 0.0;
        for (double v : x)
            s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

// Runs fn(worker_id, index) for index in [0, n). Each worker sees a stable
// worker_id it can key per-thread scratch space on. Work is handed out
// dynamically; correctness must not depend on the assignment.
template <typename Fn>
void parallel_for(long long n, int workers, Fn&& fn) {
    if (n <= 0)
        return;
    if (workers < 1)
        workers = 1;
    if (static_cast<long long>(workers) > n)
        workers = static_cast<int>(n);
    if (workers == 1) {
        for (long long i = 0; i < n; ++i)
            fn(0, i);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::atomic<bool> error_claimed{false};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (;;) {
                    const long long i = next.fetch_add(1, std::memory_order_relaxed);
                    if (i >= n || failed.load(std::memory_order_relaxed))
                        return;
                    fn(w, i);
                }
            } catch (...) {
                if (!error_claimed.exchange(true))
                    first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (failed.load())
        std::rethrow_exception(first_error);
}

}
