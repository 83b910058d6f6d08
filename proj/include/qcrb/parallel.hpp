#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qcrb {

/// Runs body(i) for i in [0, count) on up to `workers` threads, contiguous
/// chunks per thread. Callers write results by index, so the outcome never
/// depends on the worker count. The first exception thrown is rethrown.
template <typename Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
    workers = std::max(1u, workers);
    if (workers == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    const std::size_t threads = std::min<std::size_t>(workers, count);
    const std::size_t chunk = (count + threads - 1) / threads;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) {
                    body(i);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto& thread : pool) {
        thread.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

/// Like parallel_for, but hands each worker a contiguous [begin, end) range so
/// it can own per-thread scratch state (FFT plans, buffers).
template <typename Body>
void parallel_for_ranges(std::size_t count, unsigned workers, Body&& body) {
    workers = std::max(1u, workers);
    const std::size_t threads = std::max<std::size_t>(1, std::min<std::size_t>(workers, count));
    const std::size_t chunk = (count + threads - 1) / threads;
    parallel_for(threads, workers, [&](std::size_t t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin < end) {
            body(begin, end);
        }
    });
}

/// Number of hardware threads, at least 1.
inline unsigned default_workers() {
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace qcrb
