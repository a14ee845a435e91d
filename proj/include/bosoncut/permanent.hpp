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

#ifndef BOSONCUT_PERMANENT_HPP
#define BOSONCUT_PERMANENT_HPP

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "bosoncut/errors.hpp"
#include "bosoncut/kahan.hpp"
#include "bosoncut/permutations.hpp"
#include "bosoncut/rng.hpp"

namespace bosoncut {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;

inline constexpr int kExactPermanentCap = 30;
inline constexpr int kBruteforcePermanentCap = 10;
inline constexpr int kCycleRestrictedCap = 24;

/// xi^power with the convention 0^0 = 1, so a vanishing mixing weight
/// cleanly switches off every term that carries at least one factor.
inline double xi_power(double xi, int power) {
    double result = 1.0;
    for (int i = 0; i < power; ++i) {
        result *= xi;
    }
    return result;
}

/**
 * Permanent of a square complex matrix via the Glynn formula,
 *
 *   per(a) = 2^{1-n} sum_{d in {+-1}^n, d_1 = +1} (prod_k d_k)
 *            prod_j (sum_i d_i a_{ij}),
 *
 * walked in Gray-code order so each sign flip costs O(n) updates, with
 * compensated accumulation.  Runs in O(n 2^n); matrices larger than
 * size_cap are rejected (glynn_estimate covers that regime).
 */
inline Complex permanent_exact(const CMat& a, int size_cap = kExactPermanentCap) {
    if (a.rows() != a.cols()) {
        throw invalid_argument_error("permanent_exact requires a square matrix");
    }
    const int n = static_cast<int>(a.rows());
    if (n == 0) {
        return Complex(1.0, 0.0);
    }
    if (n > size_cap) {
        throw size_limit_error("permanent_exact: matrix order exceeds the exact-evaluation cap; "
                               "use glynn_estimate for a stochastic estimate");
    }
    std::vector<Complex> colsum(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        Complex s(0.0, 0.0);
        for (int i = 0; i < n; ++i) {
            s += a(i, j);
        }
        colsum[static_cast<std::size_t>(j)] = s;
    }
    std::vector<int> delta(static_cast<std::size_t>(n), 1);
    KahanSum<Complex> acc;
    double sign = 1.0;
    const std::uint64_t steps = std::uint64_t{1} << (n - 1);
    for (std::uint64_t g = 0;; ++g) {
        Complex product(1.0, 0.0);
        for (int j = 0; j < n; ++j) {
            product *= colsum[static_cast<std::size_t>(j)];
        }
        acc.add(sign * product);
        if (g + 1 >= steps) {
            break;
        }
        // Gray-code step: bit b of the counter controls delta[b + 1].
        const int bit = std::countr_zero(g + 1);
        const int row = bit + 1;
        const int flipped = -delta[static_cast<std::size_t>(row)];
        delta[static_cast<std::size_t>(row)] = flipped;
        const double offset = 2.0 * static_cast<double>(flipped);
        for (int j = 0; j < n; ++j) {
            colsum[static_cast<std::size_t>(j)] += offset * a(row, j);
        }
        sign = -sign;
    }
    const double norm = std::ldexp(1.0, 1 - n);
    return acc.get() * norm;
}

/**
 * Permanent by direct summation over all n! permutations.  Exists as an
 * independent cross-check for the Gray-code path; capped at order
 * kBruteforcePermanentCap.
 */
inline Complex permanent_bruteforce(const CMat& a, int size_cap = kBruteforcePermanentCap) {
    if (a.rows() != a.cols()) {
        throw invalid_argument_error("permanent_bruteforce requires a square matrix");
    }
    const int n = static_cast<int>(a.rows());
    if (n == 0) {
        return Complex(1.0, 0.0);
    }
    if (n > size_cap) {
        throw size_limit_error("permanent_bruteforce: matrix order exceeds the brute-force cap");
    }
    Complex total(0.0, 0.0);
    for_each_permutation(n, [&](const std::vector<int>& pi) {
        Complex product(1.0, 0.0);
        for (int i = 0; i < n; ++i) {
            product *= a(i, pi[static_cast<std::size_t>(i)]);
        }
        total += product;
    });
    return total;
}

/// Multiplies every off-diagonal entry by xi and leaves the diagonal
/// untouched.  The permanent of the rescaled matrix is the permutation
/// sum in which each permutation pi is weighted by xi^(n - fixpoints(pi)).
inline CMat xi_rescale(const CMat& a, double xi) {
    if (a.rows() != a.cols()) {
        throw invalid_argument_error("xi_rescale requires a square matrix");
    }
    if (!(xi >= 0.0 && xi <= 1.0)) {
        throw invalid_argument_error("xi_rescale requires xi in [0, 1]");
    }
    CMat rescaled = a * xi;
    rescaled.diagonal() = a.diagonal();
    return rescaled;
}

/// sum_pi xi^(n - fixpoints(pi)) prod_i a(i, pi(i)) over all n!
/// permutations, evaluated as the permanent of the xi-rescaled matrix.
inline Complex weighted_perm_sum(const CMat& a, double xi, int size_cap = kExactPermanentCap) {
    return permanent_exact(xi_rescale(a, xi), size_cap);
}

/// Same value as weighted_perm_sum but summed term by term over explicit
/// permutations; independent cross-check, capped like permanent_bruteforce.
inline Complex weighted_perm_sum_bruteforce(const CMat& a, double xi,
                                            int size_cap = kBruteforcePermanentCap) {
    if (a.rows() != a.cols()) {
        throw invalid_argument_error("weighted_perm_sum_bruteforce requires a square matrix");
    }
    if (!(xi >= 0.0 && xi <= 1.0)) {
        throw invalid_argument_error("weighted_perm_sum_bruteforce requires xi in [0, 1]");
    }
    const int n = static_cast<int>(a.rows());
    if (n == 0) {
        return Complex(1.0, 0.0);
    }
    if (n > size_cap) {
        throw size_limit_error("weighted_perm_sum_bruteforce: matrix order exceeds the cap");
    }
    Complex total(0.0, 0.0);
    for_each_permutation(n, [&](const std::vector<int>& pi) {
        Complex product(1.0, 0.0);
        for (int i = 0; i < n; ++i) {
            product *= a(i, pi[static_cast<std::size_t>(i)]);
        }
        total += xi_power(xi, n - fixed_point_count(pi)) * product;
    });
    return total;
}

/// Truncation policy: permutations are kept only if every disjoint cycle
/// has length <= k_max; each non-fixed-point cycle of length l carries a
/// weight xi^l.
struct CutoffPolicy {
    int k_max = 1;
    double xi = 1.0;
};

/**
 * sum over permutations pi with all cycle lengths <= policy.k_max of
 *   xi^(n - fixpoints(pi)) prod_i a(i, pi(i)).
 *
 * Evaluated by dynamic programming over subsets: for the smallest index m
 * of a subset S, every admissible permutation of S decomposes into the
 * cycle through m (a length-1 cycle weighted a(m, m), or a directed cycle
 * of length 2..k_max weighted xi^l times the product of its entries)
 * times an admissible permutation of the remainder.  Memoized over the
 * 2^n subsets; O(2^n poly(n) k!) overall, capped at kCycleRestrictedCap.
 */
inline Complex cycle_restricted_sum(const CMat& a, const CutoffPolicy& policy,
                                    int size_cap = kCycleRestrictedCap) {
    if (a.rows() != a.cols()) {
        throw invalid_argument_error("cycle_restricted_sum requires a square matrix");
    }
    if (policy.k_max < 1) {
        throw invalid_argument_error("cycle_restricted_sum requires k_max >= 1");
    }
    if (!(policy.xi >= 0.0 && policy.xi <= 1.0)) {
        throw invalid_argument_error("cycle_restricted_sum requires xi in [0, 1]");
    }
    const int n = static_cast<int>(a.rows());
    if (n == 0) {
        return Complex(1.0, 0.0);
    }
    if (n > size_cap) {
        throw size_limit_error("cycle_restricted_sum: matrix order exceeds the subset-DP cap");
    }
    const int k = std::min(policy.k_max, n);
    std::vector<double> xi_pow(static_cast<std::size_t>(n) + 1, 1.0);
    for (int i = 1; i <= n; ++i) {
        xi_pow[static_cast<std::size_t>(i)] = xi_pow[static_cast<std::size_t>(i - 1)] * policy.xi;
    }
    const std::uint32_t full = (n == 32) ? 0xffffffffu : ((std::uint32_t{1} << n) - 1u);
    std::vector<Complex> value(std::size_t{1} << n);
    std::vector<std::uint8_t> known(std::size_t{1} << n, 0);
    value[0] = Complex(1.0, 0.0);
    known[0] = 1;
    std::function<Complex(std::uint32_t)> solve = [&](std::uint32_t subset) -> Complex {
        if (known[subset]) {
            return value[subset];
        }
        const int m = std::countr_zero(subset);
        Complex total = a(m, m) * solve(subset & (subset - 1));
        if (k >= 2) {
            auto grow = [&](auto&& self, int last, std::uint32_t used, int length,
                            Complex prefix) -> void {
                std::uint32_t avail = subset & ~used;
                while (avail) {
                    const int next = std::countr_zero(avail);
                    avail &= avail - 1;
                    const Complex extended = prefix * a(last, next);
                    const std::uint32_t used_next = used | (std::uint32_t{1} << next);
                    total += xi_pow[static_cast<std::size_t>(length + 1)] * extended * a(next, m) *
                             solve(subset & ~used_next);
                    if (length + 1 < k) {
                        self(self, next, used_next, length + 1, extended);
                    }
                }
            };
            grow(grow, m, std::uint32_t{1} << m, 1, Complex(1.0, 0.0));
        }
        known[subset] = 1;
        value[subset] = total;
        return total;
    };
    return solve(full);
}

/// Stochastic permanent estimate with its standard error.
struct PermanentEstimate {
    Complex estimate;
    double std_error = 0.0;
    long trials = 0;
};

/**
 * Monte Carlo permanent estimator: for x uniform on {+-1}^n,
 *   per(a) = E[ prod_j x_j  prod_i (sum_j x_j a_{ij}) ],
 * so the sample mean over independent draws is unbiased.  The quoted
 * standard error is the delete-one jackknife of the mean, which for a
 * plain average reduces to sqrt(sample variance / trials); real and
 * imaginary parts are combined in quadrature.
 */
inline PermanentEstimate glynn_estimate(const CMat& a, long trials, std::uint64_t seed) {
    if (a.rows() != a.cols()) {
        throw invalid_argument_error("glynn_estimate requires a square matrix");
    }
    if (trials < 2) {
        throw invalid_argument_error("glynn_estimate requires at least 2 trials");
    }
    const int n = static_cast<int>(a.rows());
    if (n == 0) {
        return PermanentEstimate{Complex(1.0, 0.0), 0.0, trials};
    }
    Rng rng(seed);
    double mean_re = 0.0, mean_im = 0.0, m2_re = 0.0, m2_im = 0.0;
    std::vector<int> signs(static_cast<std::size_t>(n));
    std::vector<Complex> rowdot(static_cast<std::size_t>(n));
    for (long t = 0; t < trials; ++t) {
        std::uint64_t bits = 0;
        int bits_left = 0;
        int sign_product = 1;
        for (int j = 0; j < n; ++j) {
            if (bits_left == 0) {
                bits = rng.next();
                bits_left = 64;
            }
            const int s = (bits & 1u) ? 1 : -1;
            bits >>= 1;
            --bits_left;
            signs[static_cast<std::size_t>(j)] = s;
            sign_product *= s;
        }
        for (int i = 0; i < n; ++i) {
            Complex dot(0.0, 0.0);
            for (int j = 0; j < n; ++j) {
                dot += static_cast<double>(signs[static_cast<std::size_t>(j)]) * a(i, j);
            }
            rowdot[static_cast<std::size_t>(i)] = dot;
        }
        Complex sample(static_cast<double>(sign_product), 0.0);
        for (int i = 0; i < n; ++i) {
            sample *= rowdot[static_cast<std::size_t>(i)];
        }
        const double count = static_cast<double>(t + 1);
        const double d_re = sample.real() - mean_re;
        mean_re += d_re / count;
        m2_re += d_re * (sample.real() - mean_re);
        const double d_im = sample.imag() - mean_im;
        mean_im += d_im / count;
        m2_im += d_im * (sample.imag() - mean_im);
    }
    const double denom = static_cast<double>(trials) * static_cast<double>(trials - 1);
    const double se = std::sqrt((m2_re + m2_im) / denom);
    return PermanentEstimate{Complex(mean_re, mean_im), se, trials};
}

} // namespace bosoncut

#endif
