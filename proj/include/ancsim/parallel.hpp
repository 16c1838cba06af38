// ancsim - correlated-fading relay network simulator
// Copyright (C) 2026 the ancsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// ------------------------------------------------------------------------

#ifndef ANCSIM_PARALLEL_HPP
#define ANCSIM_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ancsim {

inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Evaluate f(0..n_blocks-1) across a thread pool and gather the results by
// block index. Work is handed out dynamically, but because every block's
// output depends only on its index, the gathered vector is identical for any
// worker count - the foundation of the reproducibility contract.
template <typename T, typename F>
std::vector<T> run_blocks(std::size_t n_blocks, unsigned n_workers, F &&f) {
    std::vector<T> results(n_blocks);
    if (n_blocks == 0)
        return results;
    n_workers = resolve_workers(n_workers);
    if (n_workers <= 1 || n_blocks == 1) {
        for (std::size_t b = 0; b < n_blocks; ++b)
            results[b] = f(b);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= n_blocks || failed.load())
                return;
            try {
                results[b] = f(b);
            } catch (...) {
                {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned n_threads = static_cast<unsigned>(
        std::min<std::size_t>(n_workers, n_blocks));
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t)
        pool.emplace_back(worker);
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
    return results;
}

} // namespace ancsim

#endif
