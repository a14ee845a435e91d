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

#ifndef BOSONCUT_CYCLE_COMBINATORICS_HPP
#define BOSONCUT_CYCLE_COMBINATORICS_HPP

#include <cmath>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "bosoncut/errors.hpp"

namespace bosoncut {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline BigInt factorial(int n) {
    if (n < 0) {
        throw invalid_argument_error("factorial requires n >= 0");
    }
    BigInt result = 1;
    for (int i = 2; i <= n; ++i) {
        result *= i;
    }
    return result;
}

inline BigInt binomial(int n, int k) {
    if (n < 0 || k < 0) {
        throw invalid_argument_error("binomial requires n, k >= 0");
    }
    if (k > n) {
        return 0;
    }
    if (k > n - k) {
        k = n - k;
    }
    BigInt result = 1;
    for (int i = 1; i <= k; ++i) {
        result *= (n - k + i);
        result /= i;
    }
    return result;
}

inline BigRational rational_pow(const BigRational& base, int exponent) {
    if (exponent < 0) {
        if (base == 0) {
            throw invalid_argument_error("rational_pow: zero base with negative exponent");
        }
        return 1 / rational_pow(base, -exponent);
    }
    BigRational result = 1;
    BigRational factor = base;
    int e = exponent;
    while (e > 0) {
        if (e & 1) {
            result *= factor;
        }
        e >>= 1;
        if (e > 0) {
            factor *= factor;
        }
    }
    return result;
}

/// Natural logarithm of a positive rational, evaluated in extended
/// precision so quantities far outside double range (such as 1/200!)
/// still render to a finite double log.
inline double log_of(const BigRational& value) {
    if (value <= 0) {
        throw invalid_argument_error("log_of requires a positive value");
    }
    const BigFloat num(boost::multiprecision::numerator(value));
    const BigFloat den(boost::multiprecision::denominator(value));
    const BigFloat result = boost::multiprecision::log(num) - boost::multiprecision::log(den);
    return result.convert_to<double>();
}

inline double to_double(const BigRational& value) {
    return BigFloat(value).convert_to<double>();
}

/**
 * Cycle-type generating sums over the symmetric group S_n:
 *
 *   Z_n(t_1, .., t_n) = sum over permutations of prod_k t_k^(number of
 *   k-cycles).
 *
 * weights[k-1] holds t_k; entries beyond weights.size() count as zero.
 * Computed through the recurrence
 *
 *   Z_n = sum_{k=1}^{n} (n-1)! / (n-k)! * t_k * Z_{n-k},   Z_0 = 1,
 *
 * which classifies permutations by the cycle through element n (choose
 * its k-1 companions in order, weight t_k, permute the rest).  Returns
 * the whole table Z_0 .. Z_n.
 */
inline std::vector<BigRational> cycle_sum_table(int n, const std::vector<BigRational>& weights) {
    if (n < 0) {
        throw invalid_argument_error("cycle_sum_table requires n >= 0");
    }
    std::vector<BigRational> table(static_cast<std::size_t>(n) + 1);
    table[0] = 1;
    for (int size = 1; size <= n; ++size) {
        BigRational total = 0;
        BigInt arrangements = 1;
        for (int k = 1; k <= size; ++k) {
            // arrangements = (size-1)! / (size-k)!
            if (k >= 2) {
                arrangements *= (size - k + 1);
            }
            if (k <= static_cast<int>(weights.size()) && weights[static_cast<std::size_t>(k - 1)] != 0) {
                total += BigRational(arrangements) * weights[static_cast<std::size_t>(k - 1)] *
                         table[static_cast<std::size_t>(size - k)];
            }
        }
        table[static_cast<std::size_t>(size)] = total;
    }
    return table;
}

inline BigRational cycle_sum(int n, const std::vector<BigRational>& weights) {
    return cycle_sum_table(n, weights).back();
}

/// Number of permutations of n objects whose disjoint cycles all have
/// length <= k, for every order up to n (integer recurrence, same
/// classification as cycle_sum_table).
inline std::vector<BigInt> count_restricted_table(int n, int k) {
    if (n < 0) {
        throw invalid_argument_error("count_restricted_table requires n >= 0");
    }
    if (k < 1) {
        throw invalid_argument_error("count_restricted_table requires k >= 1");
    }
    std::vector<BigInt> table(static_cast<std::size_t>(n) + 1);
    table[0] = 1;
    for (int size = 1; size <= n; ++size) {
        BigInt total = 0;
        BigInt arrangements = 1;
        const int longest = std::min(k, size);
        for (int len = 1; len <= longest; ++len) {
            if (len >= 2) {
                arrangements *= (size - len + 1);
            }
            total += arrangements * table[static_cast<std::size_t>(size - len)];
        }
        table[static_cast<std::size_t>(size)] = total;
    }
    return table;
}

inline BigInt count_restricted(int n, int k) {
    return count_restricted_table(n, k).back();
}

/// Fraction of permutations of n objects with all cycle lengths <= k.
inline BigRational fraction_exact(int n, int k) {
    return BigRational(count_restricted(n, k), factorial(n));
}

/// Number of fixed-point-free permutations of s objects,
/// d_s = s! sum_{j=0}^{s} (-1)^j / j!.
inline BigInt derangements(int s) {
    if (s < 0) {
        throw invalid_argument_error("derangements requires s >= 0");
    }
    // Accumulate s! * sum (-1)^j / j! = sum_j (-1)^j s!/j! with exact
    // integer terms, building s!/j! downward from j = s.
    BigInt term = 1;
    BigInt total = (s % 2 == 0) ? BigInt(1) : BigInt(-1);
    for (int j = s - 1; j >= 0; --j) {
        term *= (j + 1);
        if (j % 2 == 0) {
            total += term;
        } else {
            total -= term;
        }
    }
    return total;
}

/// Number of permutations of n objects with at least n - k fixed points,
/// counted as sum_{s=0}^{k} binomial(n, s) d_s.
inline BigInt count_near_identity(int n, int k) {
    if (n < 0 || k < 0) {
        throw invalid_argument_error("count_near_identity requires n, k >= 0");
    }
    BigInt total = 0;
    const int top = std::min(k, n);
    for (int s = 0; s <= top; ++s) {
        total += binomial(n, s) * derangements(s);
    }
    return total;
}

/**
 * Correction exponent in the sharp asymptotic for the restricted-cycle
 * fraction of S_n:
 *
 *   R = sum_{s=1}^{k-1} [ (s/k + 1)(s/k + 2) .. (s/k + s - 1)
 *                         / (s! (k-s)!) ] n^{(k-s)/k}
 *       - (1/k) sum_{s=2}^{k} 1/s.
 *
 * Defined for k >= 2; for k = 1 the restricted count is exactly 1 and no
 * correction exists, so 0 is returned.
 */
inline double cycle_fraction_correction(int n, int k) {
    if (n < 1) {
        throw invalid_argument_error("cycle_fraction_correction requires n >= 1");
    }
    if (k < 1) {
        throw invalid_argument_error("cycle_fraction_correction requires k >= 1");
    }
    if (k == 1) {
        return 0.0;
    }
    double first = 0.0;
    for (int s = 1; s <= k - 1; ++s) {
        double product = 1.0;
        for (int t = 1; t <= s - 1; ++t) {
            product *= static_cast<double>(s) / static_cast<double>(k) + static_cast<double>(t);
        }
        double denom = 1.0;
        for (int t = 2; t <= s; ++t) {
            denom *= t;
        }
        for (int t = 2; t <= k - s; ++t) {
            denom *= t;
        }
        first += product / denom *
                 std::pow(static_cast<double>(n),
                          static_cast<double>(k - s) / static_cast<double>(k));
    }
    double second = 0.0;
    for (int s = 2; s <= k; ++s) {
        second += 1.0 / static_cast<double>(s);
    }
    return first - second / static_cast<double>(k);
}

/// Closed-form upper bound on cycle_fraction_correction:
/// (e - 1) n^{(k-1)/k}.
inline double cycle_fraction_correction_bound(int n, int k) {
    if (n < 1 || k < 1) {
        throw invalid_argument_error("cycle_fraction_correction_bound requires n, k >= 1");
    }
    return (M_E - 1.0) *
           std::pow(static_cast<double>(n), static_cast<double>(k - 1) / static_cast<double>(k));
}

/// Lower bound 1/(12n + 1) on the Stirling-series remainder r_n in
/// n! = sqrt(2 pi n) (n/e)^n e^{r_n}.
inline double stirling_remainder_lower(int n) {
    if (n < 1) {
        throw invalid_argument_error("stirling_remainder_lower requires n >= 1");
    }
    return 1.0 / (12.0 * static_cast<double>(n) + 1.0);
}

/**
 * Asymptotic upper bound on a restricted-cycle fraction, reported in a
 * form that survives exponent ranges far beyond double:
 *
 *   bound = (2 pi n)^{-1/2} exp(-n * bracket).
 *
 * The bracket for the plain fraction is (ln n - 1)/k - (e-1)/n^{1/k};
 * the weighted variant subtracts ln(1/xi) as well.  When the bracket is
 * not positive the bound does not decay and carries no information, which
 * the vacuous flag records.
 */
struct AsymptoticBound {
    double bracket = 0.0;
    double log_value = 0.0;
    double value = 0.0;
    bool vacuous = true;
};

inline AsymptoticBound fraction_asymptotic_bound(int n, int k) {
    if (n < 1) {
        throw invalid_argument_error("fraction_asymptotic_bound requires n >= 1");
    }
    if (k < 1) {
        throw invalid_argument_error("fraction_asymptotic_bound requires k >= 1");
    }
    AsymptoticBound bound;
    const double nn = static_cast<double>(n);
    bound.bracket = (std::log(nn) - 1.0) / static_cast<double>(k) -
                    (M_E - 1.0) / std::pow(nn, 1.0 / static_cast<double>(k));
    bound.log_value = -0.5 * std::log(2.0 * M_PI * nn) - nn * bound.bracket;
    bound.value = std::exp(bound.log_value);
    bound.vacuous = !(bound.bracket > 0.0);
    return bound;
}

inline AsymptoticBound weighted_fraction_asymptotic_bound(int n, int k, double xi) {
    if (!(xi > 0.0 && xi <= 1.0)) {
        throw invalid_argument_error("weighted_fraction_asymptotic_bound requires xi in (0, 1]");
    }
    AsymptoticBound bound = fraction_asymptotic_bound(n, k);
    const double nn = static_cast<double>(n);
    bound.bracket += std::log(xi);
    bound.log_value = -0.5 * std::log(2.0 * M_PI * nn) - nn * bound.bracket;
    bound.value = std::exp(bound.log_value);
    bound.vacuous = !(bound.bracket > 0.0);
    return bound;
}

/**
 * Total weight of S_n when a permutation with c fixed points carries
 * weight xi^(n-c):
 *
 *   sum_pi xi^{n - fix(pi)} = xi^n n! sum_{j=0}^{n} (1/xi - 1)^j / j!,
 *
 * evaluated exactly in rational arithmetic.
 */
inline BigRational weighted_cycle_sum(int n, const BigRational& xi) {
    if (n < 0) {
        throw invalid_argument_error("weighted_cycle_sum requires n >= 0");
    }
    if (!(xi > 0 && xi <= 1)) {
        throw invalid_argument_error("weighted_cycle_sum requires xi in (0, 1]");
    }
    const BigRational base = 1 / xi - 1;
    BigRational series = 0;
    BigRational term = 1;
    for (int j = 0; j <= n; ++j) {
        if (j > 0) {
            term = term * base / j;
        }
        series += term;
    }
    return rational_pow(xi, n) * BigRational(factorial(n)) * series;
}

/// Same weighting restricted to permutations whose cycles all have
/// length <= k: xi^n Z_n(1/xi, 1, .., 1, 0, ..) with k leading weights.
inline BigRational weighted_restricted_sum(int n, int k, const BigRational& xi) {
    if (n < 0) {
        throw invalid_argument_error("weighted_restricted_sum requires n >= 0");
    }
    if (k < 1) {
        throw invalid_argument_error("weighted_restricted_sum requires k >= 1");
    }
    if (!(xi > 0 && xi <= 1)) {
        throw invalid_argument_error("weighted_restricted_sum requires xi in (0, 1]");
    }
    std::vector<BigRational> weights(static_cast<std::size_t>(std::min(k, std::max(n, 1))), 1);
    if (!weights.empty()) {
        weights[0] = 1 / xi;
    }
    return rational_pow(xi, n) * cycle_sum(n, weights);
}

/// Largest order for which weighted_fraction_bound computes the exact
/// weighted ratio alongside the closed-form bounds.
inline constexpr int kWeightedRatioExactCap = 400;

/**
 * The chain of bounds on the weighted restricted fraction
 * weighted_restricted_sum / weighted_cycle_sum:
 *
 *   ratio <= fraction_exact(n, k) / xi^n <= asymptotic bound,
 *
 * where the middle term is exact (rational) and the last is
 * weighted_fraction_asymptotic_bound.  The exact ratio itself is
 * included up to order kWeightedRatioExactCap.  Logs are reported so the
 * chain remains comparable when the values underflow double.
 */
struct WeightedFractionReport {
    std::optional<BigRational> exact_ratio;
    std::optional<double> log_exact_ratio;
    BigRational middle;
    double log_middle = 0.0;
    AsymptoticBound bound;
};

inline WeightedFractionReport weighted_fraction_bound(int n, int k, const BigRational& xi) {
    if (n < 1) {
        throw invalid_argument_error("weighted_fraction_bound requires n >= 1");
    }
    if (k < 1) {
        throw invalid_argument_error("weighted_fraction_bound requires k >= 1");
    }
    if (!(xi > 0 && xi <= 1)) {
        throw invalid_argument_error("weighted_fraction_bound requires xi in (0, 1]");
    }
    WeightedFractionReport report;
    report.middle = fraction_exact(n, k) / rational_pow(xi, n);
    report.log_middle = log_of(report.middle);
    report.bound = weighted_fraction_asymptotic_bound(n, k, to_double(xi));
    if (n <= kWeightedRatioExactCap) {
        report.exact_ratio = weighted_restricted_sum(n, k, xi) / weighted_cycle_sum(n, xi);
        report.log_exact_ratio = log_of(*report.exact_ratio);
    }
    return report;
}

} // namespace bosoncut

#endif
