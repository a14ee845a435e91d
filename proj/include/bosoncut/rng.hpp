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

#ifndef BOSONCUT_RNG_HPP
#define BOSONCUT_RNG_HPP

#include <cmath>
#include <cstdint>

#include "bosoncut/errors.hpp"

namespace bosoncut {

/// One step of the splitmix64 generator.  Used to expand user seeds into
/// full generator state and to derive independent per-record streams.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives a seed for an independent stream, e.g. one stream per sample
/// record.  Records drawn from streams with the same base seed but
/// different indices are reproducible regardless of the order in which
/// they are generated, which keeps parallel sampling deterministic.
inline std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t stream_index) {
    std::uint64_t state = base_seed;
    std::uint64_t mixed = splitmix64_next(state);
    state = mixed ^ (stream_index + 0x9e3779b97f4a7c15ULL);
    return splitmix64_next(state);
}

/**
 * Deterministic pseudo-random generator built on xoshiro256++ with
 * splitmix64 seeding.  All stochastic code in this library draws through
 * this class so that a (seed, stream) pair pins down every result bit for
 * bit across runs and platforms.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            word = splitmix64_next(sm);
        }
    }

    /// Next raw 64-bit output.
    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), using the top 53 bits.
    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound), bias-free via rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) {
            throw invalid_argument_error("Rng::below requires a positive bound");
        }
        std::uint64_t x, r;
        do {
            x = next();
            r = x % bound;
        } while (x - r > static_cast<std::uint64_t>(-bound));
        return r;
    }

    /// Standard normal deviate (Box-Muller, pairs cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // Shift into (0, 1] so the logarithm is finite.
        const double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Poisson deviate with the given rate.  A rate of zero returns zero
    /// without consuming any randomness.  Large rates are split using the
    /// additivity of Poisson variables so the multiplicative inversion
    /// never underflows.
    long poisson(double rate) {
        if (rate < 0.0 || !std::isfinite(rate)) {
            throw invalid_argument_error("Rng::poisson requires a finite rate >= 0");
        }
        if (rate == 0.0) {
            return 0;
        }
        long total = 0;
        while (rate > 32.0) {
            total += poisson_small(32.0);
            rate -= 32.0;
        }
        return total + poisson_small(rate);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    long poisson_small(double rate) {
        const double threshold = std::exp(-rate);
        long count = -1;
        double product = 1.0;
        do {
            ++count;
            product *= uniform01();
        } while (product > threshold);
        return count;
    }

    std::uint64_t state_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace bosoncut

#endif
