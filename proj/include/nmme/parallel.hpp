// parallel.hpp — static-chunk parallel for; results never depend on the
// thread count because work items are indexed and outputs preallocated

#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace nmme {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? int(hw) : 1;
}

template <typename F>
void parallel_for(long count, int threads, F&& body) {
    threads = resolve_threads(threads);
    if (threads <= 1 || count < 2) {
        for (long i = 0; i < count; ++i) body(i);
        return;
    }
    if (long(threads) > count) threads = int(count);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const long chunk = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const long lo = t * chunk;
        const long hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (long i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace nmme
