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

#ifndef BOSONCUT_PERMUTATIONS_HPP
#define BOSONCUT_PERMUTATIONS_HPP

#include <algorithm>
#include <numeric>
#include <vector>

#include "bosoncut/errors.hpp"

namespace bosoncut {

/// Calls fn(pi) for every permutation pi of {0, .., n-1} in lexicographic
/// order.  pi is passed as a const vector mapping index to image.
template <typename Fn>
inline void for_each_permutation(int n, Fn&& fn) {
    if (n < 0) {
        throw invalid_argument_error("for_each_permutation requires n >= 0");
    }
    std::vector<int> pi(static_cast<std::size_t>(n));
    std::iota(pi.begin(), pi.end(), 0);
    const std::vector<int>& view = pi;
    do {
        fn(view);
    } while (std::next_permutation(pi.begin(), pi.end()));
}

/**
 * Calls fn(pi) once for every permutation of {0, .., n-1} whose disjoint
 * cycles all have length <= max_cycle.  Each permutation is produced
 * exactly once: cycles are built starting from the smallest element not
 * yet assigned, so the decomposition is canonical.
 */
template <typename Fn>
inline void for_each_cycle_bounded_permutation(int n, int max_cycle, Fn&& fn) {
    if (n < 0) {
        throw invalid_argument_error("for_each_cycle_bounded_permutation requires n >= 0");
    }
    if (max_cycle < 1) {
        throw invalid_argument_error("for_each_cycle_bounded_permutation requires max_cycle >= 1");
    }
    std::vector<int> pi(static_cast<std::size_t>(n), -1);
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    const std::vector<int>& view = pi;
    auto outer = [&](auto&& self) -> void {
        int start = -1;
        for (int i = 0; i < n; ++i) {
            if (!used[static_cast<std::size_t>(i)]) {
                start = i;
                break;
            }
        }
        if (start < 0) {
            fn(view);
            return;
        }
        used[static_cast<std::size_t>(start)] = true;
        auto extend = [&](auto&& grow, int last, int length) -> void {
            pi[static_cast<std::size_t>(last)] = start;
            self(self);
            if (length < max_cycle) {
                for (int next = start + 1; next < n; ++next) {
                    if (used[static_cast<std::size_t>(next)]) {
                        continue;
                    }
                    used[static_cast<std::size_t>(next)] = true;
                    pi[static_cast<std::size_t>(last)] = next;
                    grow(grow, next, length + 1);
                    used[static_cast<std::size_t>(next)] = false;
                }
            }
        };
        extend(extend, start, 1);
        used[static_cast<std::size_t>(start)] = false;
    };
    outer(outer);
}

inline int fixed_point_count(const std::vector<int>& pi) {
    int count = 0;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        if (pi[i] == static_cast<int>(i)) {
            ++count;
        }
    }
    return count;
}

inline int largest_cycle_length(const std::vector<int>& pi) {
    const int n = static_cast<int>(pi.size());
    std::vector<bool> visited(pi.size(), false);
    int longest = 0;
    for (int i = 0; i < n; ++i) {
        if (visited[static_cast<std::size_t>(i)]) {
            continue;
        }
        int length = 0;
        int at = i;
        while (!visited[static_cast<std::size_t>(at)]) {
            visited[static_cast<std::size_t>(at)] = true;
            at = pi[static_cast<std::size_t>(at)];
            ++length;
        }
        longest = std::max(longest, length);
    }
    return longest;
}

} // namespace bosoncut

#endif
