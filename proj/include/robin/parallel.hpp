#pragma once
// Independent jobs on a small worker pool. Results land in job order so the
// output never depends on the thread count.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace robin {

// ROBIN_THREADS caps the worker count; default is the machine parallelism.
inline unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* s = std::getenv("ROBIN_THREADS")) {
        int v = std::atoi(s);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return hw;
}

template <class R>
std::vector<R> parallel_map(std::size_t count, const std::function<R(std::size_t)>& job) {
    std::vector<R> out(count);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = job(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::size_t first_index = count;
    std::mutex mu;
    auto run = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                out[i] = job(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                // keep the lowest failing index so errors are reproducible
                if (i < first_index) {
                    first_index = i;
                    first_error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

}  // namespace robin
