/// @file common.hpp
/// @brief Error types, thread budget and deterministic reduction helpers
/// shared by every ptk module.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ptk {

/// A text input (zero table, spf cache) could not be parsed or validated.
class format_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An allocation for a table of the requested size failed.
class resource_error : public std::runtime_error {
public:
    resource_error(const std::string& what, std::size_t requested_bytes)
        : std::runtime_error(what + " (requested " + std::to_string(requested_bytes) + " bytes)"),
          requested_bytes_(requested_bytes) {}
    std::size_t requested_bytes() const noexcept { return requested_bytes_; }

private:
    std::size_t requested_bytes_;
};

/// Adaptive quadrature hit its subdivision cap before meeting tolerance.
class quadrature_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Number of worker threads an operation may use. Results never depend on it.
struct Threads {
    unsigned count = 1;

    Threads() = default;
    explicit Threads(unsigned c) : count(c == 0 ? 1 : c) {}
};

/// Runs body(i) for every i in [0, n) on at most threads.count workers.
/// Work items are claimed dynamically; callers write results into slot i so
/// the outcome is independent of scheduling. The first exception thrown by
/// any item is rethrown on the calling thread.
template <typename Body>
void parallel_for(std::size_t n, Threads threads, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(threads.count, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
}

/// Pairwise sum with a reduction shape fixed by the input length alone.
template <typename T>
T tree_sum(std::span<const T> values) {
    if (values.empty()) return T{};
    if (values.size() == 1) return values[0];
    const std::size_t half = values.size() / 2;
    return tree_sum(values.first(half)) + tree_sum(values.subspan(half));
}

}  // namespace ptk
