#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

namespace pairlearn {

/// Worker count: PAIRLEARN_THREADS when set and positive, otherwise the hardware concurrency.
[[nodiscard]] std::size_t thread_count();

/// out[i] = fn(i) for i < count on up to thread_count() threads. Results land in index
/// order, so the output does not depend on scheduling. The exception of the lowest
/// failing index is rethrown.
template <typename Fn>
auto parallel_map(std::size_t count, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using R = decltype(fn(std::size_t{}));
    std::vector<std::optional<R>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    auto run = [&](std::size_t i) {
        try {
            slots[i].emplace(fn(i));
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    const std::size_t workers = std::min(thread_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) { run(i); }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < count; i += workers) { run(i); }
            });
        }
        for (auto &th : pool) { th.join(); }
    }
    for (const auto &e : errors) {
        if (e) { std::rethrow_exception(e); }
    }
    std::vector<R> out;
    out.reserve(count);
    for (auto &s : slots) { out.push_back(std::move(*s)); }
    return out;
}

}  // namespace pairlearn
