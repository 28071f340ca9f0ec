#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace contraction_lab {

/// Number of workers used when a caller passes 0.
inline unsigned default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs body(i, acc_i) for every i in [0, n) on a pool of workers and folds
/// the per-index accumulators in index order. The result depends only on
/// `body` and `combine`, never on the worker count or scheduling.
template <typename Acc, typename MakeAcc, typename Body, typename Combine>
Acc ordered_parallel_reduce(std::size_t n, MakeAcc make_acc, Body body, Combine combine, unsigned workers = 0) {
    if (workers == 0) workers = default_workers();
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));

    std::vector<Acc> partial;
    partial.reserve(n);
    for (std::size_t i = 0; i < n; ++i) partial.push_back(make_acc());

    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i, partial[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i, partial[i]);
            });
        }
    }  // jthreads join here

    Acc result = make_acc();
    for (auto& p : partial) combine(result, std::move(p));
    return result;
}

}  // namespace contraction_lab
