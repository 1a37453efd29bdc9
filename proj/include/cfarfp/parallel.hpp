#pragma once

// Deterministic parallel loop: indices are statically partitioned, every index
// writes only its own slot, so results are identical for any thread count.

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cfarfp {

template <class Fn>
void parallel_for(int count, int threads, const Fn& fn) {
    if (count <= 0) return;
    threads = std::clamp(threads, 1, count);
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        const int lo = static_cast<int>(static_cast<long long>(count) * t / threads);
        const int hi = static_cast<int>(static_cast<long long>(count) * (t + 1) / threads);
        pool.emplace_back([&, lo, hi] {
            try {
                for (int i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cfarfp
