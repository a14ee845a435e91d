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

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "bosoncut/rng.hpp"

using namespace bosoncut;

TEST_CASE("splitmix64 matches the reference sequence") {
    std::uint64_t state = 0;
    REQUIRE(splitmix64_next(state) == 0xE220A8397B1DCDAFULL);
    REQUIRE(splitmix64_next(state) == 0x6E789E6AA1B965F4ULL);
    REQUIRE(splitmix64_next(state) == 0x06C45D188009454FULL);
}

TEST_CASE("same seed reproduces the same stream") {
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 200; ++i) {
        REQUIRE(a.next() == b.next());
    }
    Rng c(43);
    Rng d(42);
    bool any_different = false;
    for (int i = 0; i < 50; ++i) {
        any_different = any_different || (c.next() != d.next());
    }
    REQUIRE(any_different);
}

TEST_CASE("uniform01 stays in range with the right mean") {
    Rng rng(7);
    const int trials = 100000;
    double sum = 0.0;
    for (int i = 0; i < trials; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    const double mean = sum / trials;
    const double five_sigma = 5.0 / std::sqrt(12.0 * trials);
    REQUIRE(std::abs(mean - 0.5) < five_sigma);
}

TEST_CASE("below is bounded and roughly uniform") {
    Rng rng(11);
    const int bound = 7;
    const int trials = 70000;
    std::vector<int> counts(bound, 0);
    for (int i = 0; i < trials; ++i) {
        const std::uint64_t v = rng.below(bound);
        REQUIRE(v < static_cast<std::uint64_t>(bound));
        ++counts[static_cast<std::size_t>(v)];
    }
    const double expected = static_cast<double>(trials) / bound;
    const double five_sigma = 5.0 * std::sqrt(expected * (1.0 - 1.0 / bound));
    for (const int c : counts) {
        REQUIRE(std::abs(c - expected) < five_sigma);
    }
}

TEST_CASE("normal draws have unit moments") {
    Rng rng(19);
    const int trials = 100000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < trials; ++i) {
        const double x = rng.normal();
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / trials;
    const double var = sum_sq / trials - mean * mean;
    REQUIRE(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(trials)));
    REQUIRE(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / trials));
}

TEST_CASE("poisson with zero rate consumes no randomness") {
    Rng a(101);
    Rng b(101);
    REQUIRE(a.poisson(0.0) == 0);
    REQUIRE(a.next() == b.next());
}

TEST_CASE("poisson means at small and split-path rates") {
    Rng rng(23);
    const int trials = 50000;
    double sum = 0.0;
    for (int i = 0; i < trials; ++i) {
        sum += static_cast<double>(rng.poisson(3.5));
    }
    REQUIRE(std::abs(sum / trials - 3.5) < 5.0 * std::sqrt(3.5 / trials));

    const int big_trials = 20000;
    double big_sum = 0.0;
    for (int i = 0; i < big_trials; ++i) {
        big_sum += static_cast<double>(rng.poisson(100.0));
    }
    REQUIRE(std::abs(big_sum / big_trials - 100.0) < 5.0 * std::sqrt(100.0 / big_trials));
}

TEST_CASE("poisson rejects bad rates") {
    Rng rng(1);
    REQUIRE_THROWS_AS(rng.poisson(-1.0), invalid_argument_error);
}

TEST_CASE("derived stream seeds do not collide") {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        seeds.insert(derive_stream_seed(1, i));
        seeds.insert(derive_stream_seed(2, i));
    }
    REQUIRE(seeds.size() == 2000);
    REQUIRE(derive_stream_seed(5, 7) == derive_stream_seed(5, 7));
}
