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

#ifndef BOSONCUT_PROBABILITY_HPP
#define BOSONCUT_PROBABILITY_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bosoncut/cycle_combinatorics.hpp"
#include "bosoncut/errors.hpp"
#include "bosoncut/interferometer.hpp"
#include "bosoncut/kahan.hpp"
#include "bosoncut/noise_bounds.hpp"
#include "bosoncut/parallel.hpp"
#include "bosoncut/permanent.hpp"
#include "bosoncut/permutations.hpp"

namespace bosoncut {

/// Photon-count cap for exact per-configuration probabilities (the
/// optimized path costs O(4^N N) per configuration).
inline constexpr int kExactConfigBosonCap = 16;
/// Photon-count cap for the reference double-permutation sum.
inline constexpr int kBruteforceConfigBosonCap = 8;
/// Photon-count cap for loss and dark-count folding.
inline constexpr int kLossyDarkBosonCap = 10;
/// Largest number of output configurations a full-distribution routine
/// will enumerate.
inline constexpr long long kDistributionConfigCap = 2000000;

/// A probability together with how it was obtained: exact evaluation, a
/// cycle-truncated approximation of the given order, or a Monte Carlo
/// estimate with its standard error.
struct ProbabilityValue {
    enum class Kind { Exact, Truncated, MonteCarlo };
    double value = 0.0;
    Kind kind = Kind::Exact;
    int cutoff = 0;
    double std_error = 0.0;
};

/// Set of one-based output ports, kept strictly increasing.
struct PortSubset {
    std::vector<int> ports;

    static PortSubset range(int first, int last) {
        if (first < 1 || last < first) {
            throw invalid_argument_error("PortSubset::range requires 1 <= first <= last");
        }
        PortSubset subset;
        for (int p = first; p <= last; ++p) {
            subset.ports.push_back(p);
        }
        return subset;
    }

    static PortSubset all(int dim) { return range(1, dim); }

    /// Every port except the given one; the complement of a single-port
    /// no-click region.
    static PortSubset all_but(int excluded, int dim) {
        if (excluded < 1 || excluded > dim) {
            throw invalid_argument_error("PortSubset::all_but requires 1 <= excluded <= dim");
        }
        if (dim < 2) {
            throw invalid_argument_error("PortSubset::all_but requires dim >= 2");
        }
        PortSubset subset;
        for (int p = 1; p <= dim; ++p) {
            if (p != excluded) {
                subset.ports.push_back(p);
            }
        }
        return subset;
    }

    void validate_against(int dim) const {
        if (ports.empty()) {
            throw invalid_argument_error("PortSubset must not be empty");
        }
        int previous = 0;
        for (const int p : ports) {
            if (p < 1 || p > dim) {
                throw invalid_argument_error("PortSubset port out of range");
            }
            if (p <= previous) {
                throw invalid_argument_error("PortSubset ports must be strictly increasing");
            }
            previous = p;
        }
    }

    bool contains(int port) const {
        return std::binary_search(ports.begin(), ports.end(), port);
    }
};

inline void validate_configuration(const std::vector<int>& occupations, int dim, int n_bosons) {
    if (static_cast<int>(occupations.size()) != dim) {
        throw invalid_argument_error("configuration must list one occupation per output port");
    }
    long long total = 0;
    for (const int count : occupations) {
        if (count < 0) {
            throw invalid_argument_error("configuration occupations must be non-negative");
        }
        total += count;
    }
    if (total != n_bosons) {
        throw validation_error("configuration total does not match the photon number");
    }
}

/// The nondecreasing list of one-based output ports underlying a
/// configuration: port l repeated m_l times.
inline std::vector<int> ports_of_configuration(const std::vector<int>& occupations) {
    std::vector<int> ports;
    for (std::size_t l = 0; l < occupations.size(); ++l) {
        for (int c = 0; c < occupations[l]; ++c) {
            ports.push_back(static_cast<int>(l) + 1);
        }
    }
    return ports;
}

/// prod_l m_l! as a double; exact for occupations up to 16.
inline double configuration_factorial(const std::vector<int>& occupations) {
    double result = 1.0;
    for (const int count : occupations) {
        for (int i = 2; i <= count; ++i) {
            result *= static_cast<double>(i);
        }
    }
    return result;
}

/// Number of ways to place n photons into dim ports.
inline BigInt configuration_count(int n, int dim) {
    if (n < 0 || dim < 1) {
        throw invalid_argument_error("configuration_count requires n >= 0 and dim >= 1");
    }
    return binomial(n + dim - 1, n);
}

/**
 * All output configurations of n photons over dim ports in lexicographic
 * order, stored flat (one byte per occupation).  The order is part of
 * the contract: samplers, distribution routines and dataset formats all
 * index configurations the same way.
 */
struct ConfigurationList {
    int dim = 0;
    int n_bosons = 0;
    long long count = 0;
    std::vector<std::uint8_t> flat;

    std::vector<int> get(long long index) const {
        std::vector<int> out(static_cast<std::size_t>(dim));
        copy_into(index, out);
        return out;
    }

    void copy_into(long long index, std::vector<int>& out) const {
        out.resize(static_cast<std::size_t>(dim));
        const std::size_t base = static_cast<std::size_t>(index) * static_cast<std::size_t>(dim);
        for (int l = 0; l < dim; ++l) {
            out[static_cast<std::size_t>(l)] = flat[base + static_cast<std::size_t>(l)];
        }
    }
};

inline ConfigurationList enumerate_configurations(int n, int dim,
                                                  long long cap = kDistributionConfigCap) {
    if (n < 0 || dim < 1) {
        throw invalid_argument_error("enumerate_configurations requires n >= 0 and dim >= 1");
    }
    if (n > 255) {
        throw size_limit_error("enumerate_configurations: occupations are stored as bytes");
    }
    const BigInt total = configuration_count(n, dim);
    if (total > cap) {
        throw size_limit_error("enumerate_configurations: configuration count exceeds the cap");
    }
    ConfigurationList list;
    list.dim = dim;
    list.n_bosons = n;
    list.count = total.convert_to<long long>();
    list.flat.reserve(static_cast<std::size_t>(list.count) * static_cast<std::size_t>(dim));
    std::vector<std::uint8_t> current(static_cast<std::size_t>(dim), 0);
    auto fill = [&](auto&& self, int port, int remaining) -> void {
        if (port == dim - 1) {
            current[static_cast<std::size_t>(port)] = static_cast<std::uint8_t>(remaining);
            list.flat.insert(list.flat.end(), current.begin(), current.end());
            return;
        }
        for (int take = 0; take <= remaining; ++take) {
            current[static_cast<std::size_t>(port)] = static_cast<std::uint8_t>(take);
            self(self, port + 1, remaining - take);
        }
    };
    fill(fill, 0, n);
    return list;
}

namespace detail {

/// N x N slice of the interferometer connecting the occupied input ports
/// (rows, one per photon) to the output slots of a configuration
/// (columns, port l repeated m_l times).
inline CMat transfer_submatrix(const Interferometer& u, const InputSpec& input,
                               const std::vector<int>& occupations) {
    const std::vector<int> slots = ports_of_configuration(occupations);
    const int n = input.n_bosons;
    CMat r(n, n);
    for (int row = 0; row < n; ++row) {
        const int in_port = input.input_ports[static_cast<std::size_t>(row)] - 1;
        for (int col = 0; col < n; ++col) {
            r(row, col) = u.matrix(in_port, slots[static_cast<std::size_t>(col)] - 1);
        }
    }
    return r;
}

/**
 * m! p_m for one output configuration, from the transfer slice R alone.
 *
 * The double permutation sum with per-cycle overlap weights collapses,
 * after substituting tau = pi sigma, to a sum over permutation pairs
 * whose weight factorizes per slot:
 *
 *   m! p_m = sum_{sigma, tau} prod_i [ xi R(sigma(i), i) conj(R(tau(i), i))
 *            + (1 - xi) [sigma(i) = tau(i)] |R(sigma(i), i)|^2 ].
 *
 * Inclusion-exclusion over the two codomains then turns the pair sum
 * into
 *
 *   sum_{A, B nonempty} (-1)^{|A| + |B|} prod_i [ xi S_A(i) conj(S_B(i))
 *     + (1 - xi) Q_{A cap B}(i) ],
 *
 * with S_X(i) the column partial sum over rows in X and Q_C(i) the
 * partial sum of squared moduli over rows in C.  Both subset loops walk
 * in Gray-code order, so the whole evaluation is O(4^N N) with
 * compensated accumulation.
 */
inline double pairwise_interference_sum(const CMat& r, double xi) {
    const int n = static_cast<int>(r.rows());
    if (n == 0) {
        return 1.0;
    }
    const std::size_t un = static_cast<std::size_t>(n);
    std::vector<Complex> rows(un * un);
    std::vector<Complex> conj_rows(un * un);
    std::vector<double> abs2_rows(un * un);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            const Complex value = r(k, i);
            rows[un * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)] = value;
            conj_rows[un * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)] =
                std::conj(value);
            abs2_rows[un * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)] =
                std::norm(value);
        }
    }
    const std::uint32_t full = (std::uint32_t{1} << n) - 1u;
    std::vector<Complex> s(un, Complex(0.0, 0.0));
    std::vector<Complex> t(un);
    std::vector<double> q(un);
    KahanSum<Complex> acc;
    std::uint32_t mask_a = 0;
    double sign_a = 1.0;
    for (std::uint32_t ga = 1; ga <= full; ++ga) {
        const int ea = std::countr_zero(ga);
        const std::size_t ra = un * static_cast<std::size_t>(ea);
        const bool added_a = ((mask_a >> ea) & 1u) == 0;
        mask_a ^= std::uint32_t{1} << ea;
        sign_a = -sign_a;
        if (added_a) {
            for (int i = 0; i < n; ++i) {
                s[static_cast<std::size_t>(i)] += rows[ra + static_cast<std::size_t>(i)];
            }
        } else {
            for (int i = 0; i < n; ++i) {
                s[static_cast<std::size_t>(i)] -= rows[ra + static_cast<std::size_t>(i)];
            }
        }
        std::fill(t.begin(), t.end(), Complex(0.0, 0.0));
        std::fill(q.begin(), q.end(), 0.0);
        std::uint32_t mask_b = 0;
        double sign_b = 1.0;
        for (std::uint32_t gb = 1; gb <= full; ++gb) {
            const int eb = std::countr_zero(gb);
            const std::size_t rb = un * static_cast<std::size_t>(eb);
            const bool added_b = ((mask_b >> eb) & 1u) == 0;
            mask_b ^= std::uint32_t{1} << eb;
            sign_b = -sign_b;
            const double step = added_b ? 1.0 : -1.0;
            for (int i = 0; i < n; ++i) {
                t[static_cast<std::size_t>(i)] += step * conj_rows[rb + static_cast<std::size_t>(i)];
            }
            if ((mask_a >> eb) & 1u) {
                for (int i = 0; i < n; ++i) {
                    q[static_cast<std::size_t>(i)] +=
                        step * abs2_rows[rb + static_cast<std::size_t>(i)];
                }
            }
            Complex product(1.0, 0.0);
            for (int i = 0; i < n; ++i) {
                product *= xi * s[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(i)] +
                           (1.0 - xi) * q[static_cast<std::size_t>(i)];
            }
            acc.add((sign_a * sign_b) * product);
        }
    }
    return acc.get().real();
}

/// m! p_m as an explicit double sum over permutation pairs.  Cross-check
/// only: O((N!)^2 N).
inline double pairwise_interference_sum_bruteforce(const CMat& r, double xi) {
    const int n = static_cast<int>(r.rows());
    if (n == 0) {
        return 1.0;
    }
    std::vector<std::vector<int>> perms;
    std::vector<Complex> amplitudes;
    for_each_permutation(n, [&](const std::vector<int>& sigma) {
        Complex amp(1.0, 0.0);
        for (int i = 0; i < n; ++i) {
            amp *= r(sigma[static_cast<std::size_t>(i)], i);
        }
        perms.push_back(sigma);
        amplitudes.push_back(amp);
    });
    KahanSum<Complex> acc;
    for (std::size_t a = 0; a < perms.size(); ++a) {
        for (std::size_t b = 0; b < perms.size(); ++b) {
            int matches = 0;
            for (int i = 0; i < n; ++i) {
                if (perms[a][static_cast<std::size_t>(i)] == perms[b][static_cast<std::size_t>(i)]) {
                    ++matches;
                }
            }
            acc.add(xi_power(xi, n - matches) * amplitudes[a] * std::conj(amplitudes[b]));
        }
    }
    return acc.get().real();
}

/// m! p^(k)_m: the same double sum but keeping only relative
/// permutations whose cycles have length <= k_max.  Each admissible pi
/// contributes xi^(N - fixpoints) times the permanent of the Hadamard
/// product R conj(R with rows permuted by pi).
inline double truncated_interference_sum(const CMat& r, double xi, int k_max) {
    const int n = static_cast<int>(r.rows());
    if (n == 0) {
        return 1.0;
    }
    CMat v(n, n);
    KahanSum<Complex> acc;
    for_each_cycle_bounded_permutation(n, k_max, [&](const std::vector<int>& pi) {
        const double weight = xi_power(xi, n - fixed_point_count(pi));
        if (weight == 0.0) {
            return;
        }
        for (int row = 0; row < n; ++row) {
            const int prow = pi[static_cast<std::size_t>(row)];
            for (int col = 0; col < n; ++col) {
                v(row, col) = r(row, col) * std::conj(r(prow, col));
            }
        }
        acc.add(weight * permanent_exact(v));
    });
    return acc.get().real();
}

} // namespace detail

/**
 * Probability of detecting the output configuration m (one occupation
 * per port) for n partially distinguishable photons with pairwise
 * overlap xi, lossless and without dark counts.
 */
inline ProbabilityValue output_probability(const Interferometer& u, const InputSpec& input,
                                           const std::vector<int>& occupations, double xi) {
    input.validate_against(u.dim);
    validate_configuration(occupations, u.dim, input.n_bosons);
    if (!(xi >= 0.0 && xi <= 1.0)) {
        throw invalid_argument_error("output_probability requires xi in [0, 1]");
    }
    if (input.n_bosons > kExactConfigBosonCap) {
        throw size_limit_error("output_probability: photon number exceeds the exact cap");
    }
    const CMat r = detail::transfer_submatrix(u, input, occupations);
    const double raw = detail::pairwise_interference_sum(r, xi);
    return ProbabilityValue{raw / configuration_factorial(occupations),
                            ProbabilityValue::Kind::Exact, 0, 0.0};
}

/// Reference evaluation of output_probability by the explicit double
/// permutation sum; agreement between the two is a correctness check on
/// the subset-sum path.
inline double output_probability_bruteforce(const Interferometer& u, const InputSpec& input,
                                            const std::vector<int>& occupations, double xi) {
    input.validate_against(u.dim);
    validate_configuration(occupations, u.dim, input.n_bosons);
    if (!(xi >= 0.0 && xi <= 1.0)) {
        throw invalid_argument_error("output_probability_bruteforce requires xi in [0, 1]");
    }
    if (input.n_bosons > kBruteforceConfigBosonCap) {
        throw size_limit_error("output_probability_bruteforce: photon number exceeds the cap");
    }
    const CMat r = detail::transfer_submatrix(u, input, occupations);
    return detail::pairwise_interference_sum_bruteforce(r, xi) /
           configuration_factorial(occupations);
}

/**
 * The order-k classical approximation of output_probability: relative
 * permutations are kept only when all their disjoint cycles have length
 * <= policy.k_max.  For k_max >= n every permutation is admissible and
 * the call forwards to the exact evaluation, so the equality is by
 * construction.  Truncated values are not guaranteed to be non-negative.
 */
inline ProbabilityValue output_probability_truncated(const Interferometer& u,
                                                     const InputSpec& input,
                                                     const std::vector<int>& occupations,
                                                     const CutoffPolicy& policy) {
    input.validate_against(u.dim);
    validate_configuration(occupations, u.dim, input.n_bosons);
    if (policy.k_max < 1) {
        throw invalid_argument_error("output_probability_truncated requires k_max >= 1");
    }
    if (!(policy.xi >= 0.0 && policy.xi <= 1.0)) {
        throw invalid_argument_error("output_probability_truncated requires xi in [0, 1]");
    }
    if (policy.k_max >= input.n_bosons) {
        ProbabilityValue exact = output_probability(u, input, occupations, policy.xi);
        return ProbabilityValue{exact.value, ProbabilityValue::Kind::Truncated, policy.k_max, 0.0};
    }
    if (input.n_bosons > kExactConfigBosonCap) {
        throw size_limit_error("output_probability_truncated: photon number exceeds the cap");
    }
    const CMat r = detail::transfer_submatrix(u, input, occupations);
    const double raw = detail::truncated_interference_sum(r, policy.xi, policy.k_max);
    return ProbabilityValue{raw / configuration_factorial(occupations),
                            ProbabilityValue::Kind::Truncated, policy.k_max, 0.0};
}

/// Exact probabilities for every configuration in list order.
inline std::vector<double> enumerate_distribution(const Interferometer& u, const InputSpec& input,
                                                  double xi, const ConfigurationList& list) {
    input.validate_against(u.dim);
    if (!(xi >= 0.0 && xi <= 1.0)) {
        throw invalid_argument_error("enumerate_distribution requires xi in [0, 1]");
    }
    if (list.dim != u.dim || list.n_bosons != input.n_bosons) {
        throw invalid_argument_error("enumerate_distribution: configuration list mismatch");
    }
    if (input.n_bosons > kExactConfigBosonCap) {
        throw size_limit_error("enumerate_distribution: photon number exceeds the exact cap");
    }
    std::vector<double> probs(static_cast<std::size_t>(list.count));
    parallel_for(static_cast<std::size_t>(list.count), 64, [&](std::size_t begin, std::size_t end) {
        std::vector<int> occupations;
        for (std::size_t i = begin; i < end; ++i) {
            list.copy_into(static_cast<long long>(i), occupations);
            const CMat r = detail::transfer_submatrix(u, input, occupations);
            probs[i] = detail::pairwise_interference_sum(r, xi) /
                       configuration_factorial(occupations);
        }
    });
    return probs;
}

inline std::vector<double> enumerate_distribution(const Interferometer& u, const InputSpec& input,
                                                  double xi) {
    return enumerate_distribution(u, input, xi,
                                  enumerate_configurations(input.n_bosons, u.dim));
}

/// Order-k probabilities for every configuration in list order (raw
/// values; small negatives are possible and left untouched here).
inline std::vector<double> enumerate_distribution_truncated(const Interferometer& u,
                                                            const InputSpec& input,
                                                            const CutoffPolicy& policy,
                                                            const ConfigurationList& list) {
    input.validate_against(u.dim);
    if (list.dim != u.dim || list.n_bosons != input.n_bosons) {
        throw invalid_argument_error("enumerate_distribution_truncated: list mismatch");
    }
    if (policy.k_max >= input.n_bosons) {
        return enumerate_distribution(u, input, policy.xi, list);
    }
    if (input.n_bosons > kExactConfigBosonCap) {
        throw size_limit_error("enumerate_distribution_truncated: photon number exceeds the cap");
    }
    std::vector<double> probs(static_cast<std::size_t>(list.count));
    parallel_for(static_cast<std::size_t>(list.count), 16, [&](std::size_t begin, std::size_t end) {
        std::vector<int> occupations;
        for (std::size_t i = begin; i < end; ++i) {
            list.copy_into(static_cast<long long>(i), occupations);
            const CMat r = detail::transfer_submatrix(u, input, occupations);
            probs[i] = detail::truncated_interference_sum(r, policy.xi, policy.k_max) /
                       configuration_factorial(occupations);
        }
    });
    return probs;
}

inline std::vector<double> enumerate_distribution_truncated(const Interferometer& u,
                                                            const InputSpec& input,
                                                            const CutoffPolicy& policy) {
    return enumerate_distribution_truncated(u, input, policy,
                                            enumerate_configurations(input.n_bosons, u.dim));
}

/**
 * Positive semi-definite Hermitian matrix A with
 * A(r, c) = sum_{l in omega} U(q_r, l) conj(U(q_c, l)), rows and columns
 * indexed by the occupied input ports q.  The no-detection probabilities
 * on the complement of omega are permanents of its xi-rescaled version.
 */
inline CMat gram_submatrix(const Interferometer& u, const InputSpec& input,
                           const PortSubset& omega) {
    input.validate_against(u.dim);
    omega.validate_against(u.dim);
    const int n = input.n_bosons;
    CMat a(n, n);
    for (int row = 0; row < n; ++row) {
        const int pr = input.input_ports[static_cast<std::size_t>(row)] - 1;
        for (int col = 0; col < n; ++col) {
            const int pc = input.input_ports[static_cast<std::size_t>(col)] - 1;
            Complex total(0.0, 0.0);
            for (const int l : omega.ports) {
                total += u.matrix(pr, l - 1) * std::conj(u.matrix(pc, l - 1));
            }
            a(row, col) = total;
        }
    }
    return a;
}

/// Probability that all photons land inside the port subset omega,
/// evaluated as the permanent of the xi-rescaled Gram matrix.
inline ProbabilityValue subset_probability(const Interferometer& u, const InputSpec& input,
                                           const PortSubset& omega, double xi) {
    const CMat gram = gram_submatrix(u, input, omega);
    const Complex per = permanent_exact(xi_rescale(gram, xi));
    return ProbabilityValue{per.real(), ProbabilityValue::Kind::Exact, 0, 0.0};
}

/// Order-k approximation of subset_probability via the cycle-restricted
/// permutation sum over the same rescaled Gram matrix.
inline ProbabilityValue truncated_subset_probability(const Interferometer& u,
                                                     const InputSpec& input,
                                                     const PortSubset& omega,
                                                     const CutoffPolicy& policy) {
    const CMat gram = gram_submatrix(u, input, omega);
    const Complex value = cycle_restricted_sum(gram, policy);
    return ProbabilityValue{value.real(), ProbabilityValue::Kind::Truncated, policy.k_max, 0.0};
}

/// Monte Carlo estimate of subset_probability, for photon numbers past
/// the exact-permanent cap.
inline ProbabilityValue subset_probability_estimate(const Interferometer& u,
                                                    const InputSpec& input, const PortSubset& omega,
                                                    double xi, long trials, std::uint64_t seed) {
    const CMat gram = gram_submatrix(u, input, omega);
    const PermanentEstimate estimate = glynn_estimate(xi_rescale(gram, xi), trials, seed);
    return ProbabilityValue{estimate.estimate.real(), ProbabilityValue::Kind::MonteCarlo, 0,
                            estimate.std_error};
}

namespace detail {

inline void check_policy_consistency(double xi, const CutoffPolicy& policy, const char* where) {
    if (std::abs(policy.xi - xi) > 1e-12) {
        throw invalid_argument_error(std::string(where) +
                                     ": xi and policy.xi must agree (same noise on both sides)");
    }
}

} // namespace detail

/**
 * Gap between the exact and the order-k no-click probability of output
 * port 1: P1 - P1^(k) with P1 the probability that no photon reaches
 * port 1.  This is the observable whose Haar average the w1_bound
 * estimates from below.
 */
inline double delta_p1(const Interferometer& u, const InputSpec& input, double xi,
                       const CutoffPolicy& policy) {
    detail::check_policy_consistency(xi, policy, "delta_p1");
    if (u.dim < 2) {
        throw invalid_argument_error("delta_p1 requires dim >= 2");
    }
    const PortSubset omega = PortSubset::all_but(1, u.dim);
    const double exact = subset_probability(u, input, omega, xi).value;
    const double truncated = truncated_subset_probability(u, input, omega, policy).value;
    return exact - truncated;
}

/// Exact total variation distance between the full output distribution
/// and its order-k truncation, with the accompanying certificate.
struct TvReport {
    double tv = 0.0;
    /// Probability gap on the subset of configurations where the exact
    /// distribution exceeds the truncated one.  Equals tv: that subset
    /// attains the subset-gap lower bound with equality.
    double sign_split_gap = 0.0;
    long long config_count = 0;
    int cutoff = 0;
};

inline TvReport tv_distance_exact(const Interferometer& u, const InputSpec& input, double xi,
                                  const CutoffPolicy& policy) {
    detail::check_policy_consistency(xi, policy, "tv_distance_exact");
    const ConfigurationList list = enumerate_configurations(input.n_bosons, u.dim);
    const std::vector<double> exact = enumerate_distribution(u, input, xi, list);
    const std::vector<double> truncated = enumerate_distribution_truncated(u, input, policy, list);
    KahanSum<double> abs_sum;
    KahanSum<double> positive_sum;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        const double diff = exact[i] - truncated[i];
        abs_sum.add(std::abs(diff));
        if (diff > 0.0) {
            positive_sum.add(diff);
        }
    }
    TvReport report;
    report.tv = 0.5 * abs_sum.get();
    report.sign_split_gap = positive_sum.get();
    report.config_count = list.count;
    report.cutoff = policy.k_max;
    return report;
}

namespace detail {

/// nu^d e^-nu / d!.
inline double poisson_pmf(double nu, int d) {
    if (d < 0) {
        return 0.0;
    }
    if (nu == 0.0) {
        return d == 0 ? 1.0 : 0.0;
    }
    double value = std::exp(-nu);
    for (int i = 1; i <= d; ++i) {
        value *= nu / static_cast<double>(i);
    }
    return value;
}

} // namespace detail

/**
 * Output-configuration probability folding in all three noise sources:
 * each photon is independently transmitted with probability eta^2, the
 * survivors interfere with pairwise overlap xi, and every detector adds
 * Poisson dark counts of rate nu.  The configuration total may therefore
 * differ from the photon number.  Exponential in the photon number
 * (every survivor subset is enumerated), capped at kLossyDarkBosonCap.
 */
inline double lossy_dark_probability(const Interferometer& u, const InputSpec& input,
                                     const std::vector<int>& occupations,
                                     const NoiseParams& noise) {
    input.validate_against(u.dim);
    noise.validate();
    if (static_cast<int>(occupations.size()) != u.dim) {
        throw invalid_argument_error("lossy_dark_probability: configuration size mismatch");
    }
    for (const int count : occupations) {
        if (count < 0) {
            throw invalid_argument_error("lossy_dark_probability: negative occupation");
        }
    }
    const int n = input.n_bosons;
    if (n > kLossyDarkBosonCap) {
        throw size_limit_error("lossy_dark_probability: photon number exceeds the cap");
    }
    const int dim = u.dim;
    int total_counts = 0;
    for (const int count : occupations) {
        total_counts += count;
    }
    const double transmit = noise.eta * noise.eta;
    KahanSum<double> total;
    const std::uint32_t subsets = std::uint32_t{1} << n;
    std::vector<int> survivor_ports;
    std::vector<int> partial(static_cast<std::size_t>(dim), 0);
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
        const int survivors = std::popcount(mask);
        if (survivors > total_counts) {
            continue;
        }
        double weight = 1.0;
        for (int i = 0; i < survivors; ++i) {
            weight *= transmit;
        }
        for (int i = 0; i < n - survivors; ++i) {
            weight *= 1.0 - transmit;
        }
        if (weight == 0.0) {
            continue;
        }
        survivor_ports.clear();
        for (int j = 0; j < n; ++j) {
            if ((mask >> j) & 1u) {
                survivor_ports.push_back(input.input_ports[static_cast<std::size_t>(j)]);
            }
        }
        InputSpec sub;
        sub.n_bosons = survivors;
        sub.input_ports = survivor_ports;
        // Split the observed counts into survivor detections (a
        // sub-configuration with the survivor total) and dark counts.
        auto split = [&](auto&& self, int port, int remaining) -> void {
            if (port == dim) {
                if (remaining != 0) {
                    return;
                }
                double core = 1.0;
                if (survivors > 0) {
                    const CMat r = detail::transfer_submatrix(u, sub, partial);
                    core = detail::pairwise_interference_sum(r, noise.xi) /
                           configuration_factorial(partial);
                }
                double dark = 1.0;
                for (int l = 0; l < dim; ++l) {
                    dark *= detail::poisson_pmf(noise.nu,
                                                occupations[static_cast<std::size_t>(l)] -
                                                    partial[static_cast<std::size_t>(l)]);
                }
                if (dark != 0.0) {
                    total.add(weight * core * dark);
                }
                return;
            }
            const int here = std::min(occupations[static_cast<std::size_t>(port)], remaining);
            for (int take = 0; take <= here; ++take) {
                partial[static_cast<std::size_t>(port)] = take;
                self(self, port + 1, remaining - take);
            }
            partial[static_cast<std::size_t>(port)] = 0;
        };
        split(split, 0, survivors);
    }
    return total.get();
}

} // namespace bosoncut

#endif
