#pragma once

// Index-ordered fan-out over independent samples. Each sample draws from its
// own RNG stream, so results do not depend on thread count or scheduling.

#include <cstddef>
#include <exception>
#include <type_traits>
#include <vector>

#include <omp.h>

namespace jumpforge {

/// Thread cap from JUMPFORGE_THREADS (unset or invalid: OpenMP default).
int configured_threads();

/// results[i] = fn(i), evaluated across threads.
template <class Fn>
auto map_indexed(std::size_t n, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
    using R = std::invoke_result_t<Fn&, std::size_t>;
    std::vector<R> out(n);
    std::vector<std::exception_ptr> errors(n);
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(configured_threads())
    for (long long i = 0; i < count; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

/// Serial reference for map_indexed.
template <class Fn>
auto map_indexed_serial(std::size_t n, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
    std::vector<std::invoke_result_t<Fn&, std::size_t>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
    return out;
}

}  // namespace jumpforge
