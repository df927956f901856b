#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace usc {

/// Number of workers used when a caller passes 0.
inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Evaluates f(0) ... f(n-1) on a pool of threads and returns the results in
/// index order. Each index is computed independently, so the output does not
/// depend on the worker count. The first exception (lowest index) is rethrown.
template <class F>
auto parallel_map(std::size_t n, F&& f, unsigned workers = 0) {
    using R = std::invoke_result_t<F&, std::size_t>;
    if (workers == 0) workers = default_workers();
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));

    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    auto body = [&](std::size_t first) {
        for (std::size_t i = first; i < n; i += workers) {
            try {
                slots[i].emplace(f(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
        for (auto& t : pool) t.join();
    }

    std::vector<R> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

}  // namespace usc
