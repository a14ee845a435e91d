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

// Prints how fast the fraction of relative permutations with short
// cycles dies off as the photon number grows, next to its closed-form
// asymptotic bound.

#include <cmath>
#include <cstdio>

#include "bosoncut/bosoncut.hpp"

int main() {
    using namespace bosoncut;

    const double log10_scale = std::log(10.0);
    for (const int k : {2, 3, 4}) {
        std::printf("cutoff order %d\n", k);
        std::printf("  %6s  %16s  %16s\n", "n", "log10 fraction", "log10 bound");
        for (const int n : {20, 50, 100, 200, 400}) {
            const double log_fraction = log_of(fraction_exact(n, k));
            const AsymptoticBound bound = fraction_asymptotic_bound(n, k);
            std::printf("  %6d  %16.3f  %16.3f%s\n", n, log_fraction / log10_scale,
                        bound.log_value / log10_scale, bound.vacuous ? "  (vacuous)" : "");
        }
    }
    std::printf("\nweighted by an overlap of 9/10 (exact rational arithmetic)\n");
    const BigRational xi(9, 10);
    for (const int n : {20, 50, 100, 200}) {
        const WeightedFractionReport report = weighted_fraction_bound(n, 3, xi);
        std::printf("  n = %3d: log10 ratio %10.3f, middle %10.3f, bound %10.3f%s\n", n,
                    *report.log_exact_ratio / log10_scale, report.log_middle / log10_scale,
                    report.bound.log_value / log10_scale,
                    report.bound.vacuous ? " (vacuous)" : "");
    }
    return 0;
}
