#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace ccd {

// Global worker budget for the data-parallel sweeps (set from the CLI).
int thread_budget();
void set_thread_budget(int n);

// Chunked parallel loop over [0, n). fn(begin, end) must be independent per
// chunk; chunk boundaries are deterministic so reductions that combine
// per-chunk partials in index order stay byte-reproducible for any budget.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
    int nt = std::min(thread_budget(), n);
    if (nt <= 1 || n <= 1) {
        if (n > 0) fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt - 1);
    int chunk = (n + nt - 1) / nt;
    for (int t = 1; t < nt; ++t) {
        int b = t * chunk, e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    fn(0, std::min(n, chunk));
    for (auto& th : pool) th.join();
}

}  // namespace ccd
