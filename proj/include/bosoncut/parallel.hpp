/**
 * Copyright 2026 The bosoncut Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BOSONCUT_PARALLEL_HPP
#define BOSONCUT_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "bosoncut/kahan.hpp"

namespace bosoncut {

/// Number of worker threads.  Controlled by the BOSONCUT_THREADS
/// environment variable; defaults to the hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("BOSONCUT_THREADS")) {
        try {
            const long parsed = std::stol(env);
            if (parsed >= 1) {
                return static_cast<unsigned>(parsed);
            }
        } catch (...) {
            // Fall through to the default on unparsable input.
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw >= 1 ? hw : 1u;
}

/**
 * Runs fn(begin, end) over [0, total) split into fixed-size chunks that
 * are handed out to workers dynamically.  fn must only touch state owned
 * by its own index range; under that contract the result is identical for
 * any thread count.
 */
template <typename Fn>
void parallel_for(std::size_t total, std::size_t chunk_size, Fn&& fn) {
    if (total == 0) {
        return;
    }
    if (chunk_size == 0) {
        chunk_size = 1;
    }
    const std::size_t chunk_count = (total + chunk_size - 1) / chunk_size;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(worker_count(), chunk_count));
    if (workers <= 1) {
        fn(std::size_t{0}, total);
        return;
    }
    std::atomic<std::size_t> next_chunk{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t chunk = next_chunk.fetch_add(1);
            if (chunk >= chunk_count) {
                return;
            }
            const std::size_t begin = chunk * chunk_size;
            const std::size_t end = std::min(begin + chunk_size, total);
            fn(begin, end);
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(workers - 1);
    for (unsigned t = 0; t + 1 < workers; ++t) {
        threads.emplace_back(work);
    }
    work();
    for (auto& thread : threads) {
        thread.join();
    }
}

/**
 * Deterministic parallel reduction: per_index(i) values are summed with
 * compensated accumulation inside fixed chunks and the chunk partials are
 * combined in chunk order, so the result does not depend on how many
 * threads ran.
 */
template <typename T, typename Fn>
T parallel_sum(std::size_t total, std::size_t chunk_size, Fn&& per_index) {
    if (total == 0) {
        return T{};
    }
    if (chunk_size == 0) {
        chunk_size = 1;
    }
    const std::size_t chunk_count = (total + chunk_size - 1) / chunk_size;
    std::vector<KahanSum<T>> partials(chunk_count);
    parallel_for(total, chunk_size, [&](std::size_t begin, std::size_t end) {
        const std::size_t chunk = begin / chunk_size;
        for (std::size_t i = begin; i < end; ++i) {
            partials[chunk].add(per_index(i));
        }
    });
    KahanSum<T> combined;
    for (const auto& partial : partials) {
        combined.merge(partial);
    }
    return combined.get();
}

} // namespace bosoncut

#endif
