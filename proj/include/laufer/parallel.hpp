#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace laufer {

/// Apply fn to every element, fanning out over hardware threads, and return
/// the results in input order. All pipeline stages are pure functions over
/// immutable values, so element-wise parallelism is safe; fn should catch
/// its own per-element failures when those are data, not errors.
template <class In, class Fn>
auto parallel_map(const std::vector<In>& items, Fn fn)
    -> std::vector<decltype(fn(items.front()))> {
    using Out = decltype(fn(items.front()));
    std::vector<Out> results(items.size());
    if (items.empty()) return results;
    unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(),
                                          static_cast<unsigned>(items.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < items.size(); ++i) results[i] = fn(items[i]);
        return results;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < items.size(); i += workers) results[i] = fn(items[i]);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

}  // namespace laufer
