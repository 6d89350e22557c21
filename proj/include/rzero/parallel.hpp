#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rzero {

/// Fixed trial-chunk size used by every parallel loop. Chunk boundaries never
/// depend on the thread count, and per-chunk results are merged in chunk
/// order, which makes floating-point reductions reproducible across thread
/// counts.
inline constexpr std::size_t kChunkSize = 64;

/// Resolve a requested thread count: 0 means "hardware concurrency".
inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Evaluate fn(begin, end) on consecutive chunks of [0, n) and return the
/// results in chunk order. The first exception thrown by any chunk is
/// rethrown on the calling thread.
template <typename Fn>
auto map_chunks(std::size_t n, unsigned threads, Fn&& fn, std::size_t chunk = kChunkSize)
    -> std::vector<decltype(fn(std::size_t{}, std::size_t{}))> {
    using Result = decltype(fn(std::size_t{}, std::size_t{}));
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    std::vector<Result> results(n_chunks);
    if (n_chunks == 0) return results;

    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), n_chunks));
    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c)
            results[c] = fn(c * chunk, std::min(n, (c + 1) * chunk));
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            try {
                results[c] = fn(c * chunk, std::min(n, (c + 1) * chunk));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_chunks);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return results;
}

/// Streaming mean/variance accumulator with an order-sensitive but
/// deterministic merge (Chan et al. pairwise update).
struct RunningStats {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(const RunningStats& other) {
        if (other.n == 0) return;
        if (n == 0) {
            *this = other;
            return;
        }
        const double total = static_cast<double>(n + other.n);
        const double delta = other.mean - mean;
        mean += delta * static_cast<double>(other.n) / total;
        m2 += other.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(other.n) / total;
        n += other.n;
    }

    /// Unbiased sample variance.
    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
    /// Standard error of the mean.
    double standard_error() const {
        return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
    }
};

}  // namespace rzero
