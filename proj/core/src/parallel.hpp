#ifndef TRAILMINE_PARALLEL_HPP
#define TRAILMINE_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace trailmine::detail {

inline unsigned resolve_threads(unsigned requested)
{
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/**
 * Calls body(i) for every i in [0, n_tasks) on up to `threads` workers.
 * Tasks are claimed dynamically; callers must make each task write only to
 * its own slot. The first exception thrown by any task is rethrown.
 */
template <typename Body>
void parallel_for(std::size_t n_tasks, unsigned threads, Body&& body)
{
    const std::size_t workers{std::min<std::size_t>(resolve_threads(threads), n_tasks)};
    if (workers <= 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const std::size_t i{next.fetch_add(1, std::memory_order_relaxed)};
                if (i >= n_tasks) break;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock{error_mutex};
                    if (!error) error = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                }
            }
        });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
}

} // namespace trailmine::detail

#endif // TRAILMINE_PARALLEL_HPP
