#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace qp {

/// Worker count: hardware concurrency capped by the QPCALC_THREADS variable.
inline unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("QPCALC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v < long(n)) n = unsigned(v);
    }
    return n;
}

/// Run fn(i) for i in [0, n) on the worker pool. Tasks must be independent;
/// exceptions propagate from the first failing index.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace qp
