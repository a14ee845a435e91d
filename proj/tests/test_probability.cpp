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
#include <complex>
#include <set>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "bosoncut/kahan.hpp"
#include "bosoncut/permanent.hpp"
#include "bosoncut/permutations.hpp"
#include "bosoncut/probability.hpp"
#include "bosoncut/rng.hpp"

using namespace bosoncut;

namespace {

/// Photon-to-slot transfer matrix assembled with nothing but public
/// accessors, for oracle computations independent of the library path.
CMat reference_transfer(const Interferometer& u, const InputSpec& input,
                        const std::vector<int>& occupations) {
    const std::vector<int> slots = ports_of_configuration(occupations);
    const int n = input.n_bosons;
    CMat r(n, n);
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            r(row, col) = u.matrix(input.input_ports[static_cast<std::size_t>(row)] - 1,
                                   slots[static_cast<std::size_t>(col)] - 1);
        }
    }
    return r;
}

/// Double permutation sum with an explicit cycle filter on the relative
/// permutation; the k_max = n case is the full probability.
double reference_truncated_raw(const CMat& r, double xi, int k_max) {
    const int n = static_cast<int>(r.rows());
    KahanSum<double> total;
    for_each_cycle_bounded_permutation(n, k_max, [&](const std::vector<int>& pi) {
        const double weight = xi_power(xi, n - fixed_point_count(pi));
        if (weight == 0.0) {
            return;
        }
        KahanSum<Complex> inner;
        for_each_permutation(n, [&](const std::vector<int>& sigma) {
            Complex term(1.0, 0.0);
            for (int i = 0; i < n; ++i) {
                const int boson = sigma[static_cast<std::size_t>(i)];
                const int partner = pi[static_cast<std::size_t>(boson)];
                term *= r(boson, i) * std::conj(r(partner, i));
            }
            inner.add(term);
        });
        total.add(weight * inner.get().real());
    });
    return total.get();
}

double sum_over_subset(const ConfigurationList& configs, const std::vector<double>& probs,
                       const PortSubset& omega) {
    KahanSum<double> total;
    std::vector<int> m;
    for (long long i = 0; i < configs.count; ++i) {
        configs.copy_into(i, m);
        bool inside = true;
        for (int l = 0; l < configs.dim; ++l) {
            if (m[static_cast<std::size_t>(l)] > 0 && !omega.contains(l + 1)) {
                inside = false;
                break;
            }
        }
        if (inside) {
            total.add(probs[static_cast<std::size_t>(i)]);
        }
    }
    return total.get();
}

} // namespace

TEST_CASE("configuration plumbing") {
    REQUIRE(ports_of_configuration({2, 0, 1}) == std::vector<int>{1, 1, 3});
    REQUIRE(configuration_count(3, 3) == 10);
    REQUIRE(configuration_factorial({2, 0, 1}) == 2.0);
    REQUIRE(configuration_factorial({3, 2, 0}) == 12.0);

    const ConfigurationList list = enumerate_configurations(2, 3);
    REQUIRE(list.count == 6);
    REQUIRE(list.get(0) == std::vector<int>{0, 0, 2});
    REQUIRE(list.get(list.count - 1) == std::vector<int>{2, 0, 0});
    std::set<std::vector<int>> seen;
    for (long long i = 0; i < list.count; ++i) {
        const std::vector<int> m = list.get(i);
        int total = 0;
        for (const int c : m) {
            total += c;
        }
        REQUIRE(total == 2);
        seen.insert(m);
    }
    REQUIRE(seen.size() == 6);

    REQUIRE_THROWS_AS(validate_configuration({1, 1}, 3, 2), invalid_argument_error);
    REQUIRE_THROWS_AS(validate_configuration({1, -1, 2}, 3, 2), invalid_argument_error);
    REQUIRE_THROWS_AS(validate_configuration({1, 1, 1}, 3, 2), validation_error);
}

TEST_CASE("output probability matches the double permutation sum") {
    for (const int n : {2, 3, 4}) {
        const int dim = n + 2;
        for (const bool use_fourier : {true, false}) {
            const Interferometer u =
                use_fourier ? fourier(dim) : haar_random(dim, 17 + static_cast<std::uint64_t>(n));
            const InputSpec input = InputSpec::first_ports(n);
            const ConfigurationList configs = enumerate_configurations(n, dim);
            Rng pick(5);
            for (int trial = 0; trial < 4; ++trial) {
                const std::vector<int> m =
                    configs.get(static_cast<long long>(pick.below(
                        static_cast<std::uint64_t>(configs.count))));
                for (const double xi : {0.0, 0.5, 1.0}) {
                    const double fast = output_probability(u, input, m, xi).value;
                    const double slow = output_probability_bruteforce(u, input, m, xi);
                    REQUIRE(std::abs(fast - slow) < 1e-10 * std::max(1.0, std::abs(slow)));
                }
            }
        }
    }
}

TEST_CASE("full and zero overlap reduce to single permanents") {
    const Interferometer u = haar_random(5, 23);
    const InputSpec input = InputSpec::first_ports(4);
    const ConfigurationList configs = enumerate_configurations(4, 5);
    Rng pick(9);
    for (int trial = 0; trial < 5; ++trial) {
        const std::vector<int> m = configs.get(
            static_cast<long long>(pick.below(static_cast<std::uint64_t>(configs.count))));
        const CMat r = reference_transfer(u, input, m);
        const double norm = configuration_factorial(m);

        const double indistinct = output_probability(u, input, m, 1.0).value;
        const double from_permanent = std::norm(permanent_exact(r)) / norm;
        REQUIRE(std::abs(indistinct - from_permanent) < 1e-10 * std::max(1.0, from_permanent));

        const double distinct = output_probability(u, input, m, 0.0).value;
        const CMat abs2 = r.cwiseAbs2().cast<Complex>();
        const double classical = permanent_exact(abs2).real() / norm;
        REQUIRE(std::abs(distinct - classical) < 1e-10 * std::max(1.0, classical));
    }
}

TEST_CASE("enumerated distributions are normalized") {
    {
        const Interferometer u = haar_random(5, 31);
        const InputSpec input = InputSpec::first_ports(3);
        const std::vector<double> probs = enumerate_distribution(u, input, 0.6);
        KahanSum<double> total;
        for (const double p : probs) {
            REQUIRE(p > -1e-12);
            total.add(p);
        }
        REQUIRE(std::abs(total.get() - 1.0) < 1e-10);
    }
    {
        const Interferometer u = fourier(4);
        const InputSpec input = InputSpec::first_ports(4);
        const std::vector<double> probs = enumerate_distribution(u, input, 0.9);
        KahanSum<double> total;
        for (const double p : probs) {
            total.add(p);
        }
        REQUIRE(std::abs(total.get() - 1.0) < 1e-10);
    }
}

TEST_CASE("truncation at n or beyond reproduces the exact values") {
    const Interferometer u = haar_random(5, 41);
    const InputSpec input = InputSpec::first_ports(3);
    const ConfigurationList configs = enumerate_configurations(3, 5);
    const std::vector<double> exact = enumerate_distribution(u, input, 0.8, configs);
    const std::vector<double> trunc = enumerate_distribution_truncated(
        u, input, CutoffPolicy{3, 0.8}, configs);
    const std::vector<double> beyond = enumerate_distribution_truncated(
        u, input, CutoffPolicy{7, 0.8}, configs);
    for (std::size_t i = 0; i < exact.size(); ++i) {
        REQUIRE(trunc[i] == Catch::Approx(exact[i]).margin(1e-14));
        REQUIRE(beyond[i] == Catch::Approx(exact[i]).margin(1e-14));
    }
    const std::vector<int> m = configs.get(2);
    const ProbabilityValue v = output_probability_truncated(u, input, m, CutoffPolicy{5, 0.8});
    REQUIRE(v.kind == ProbabilityValue::Kind::Truncated);
    REQUIRE(v.cutoff == 5);
    REQUIRE(v.value == Catch::Approx(output_probability(u, input, m, 0.8).value).margin(1e-14));
}

TEST_CASE("order-1 truncation is the classical distribution at any overlap") {
    const Interferometer u = haar_random(5, 43);
    const InputSpec input = InputSpec::first_ports(4);
    const ConfigurationList configs = enumerate_configurations(4, 5);
    const std::vector<double> classical = enumerate_distribution(u, input, 0.0, configs);
    for (const double xi : {0.3, 0.7, 1.0}) {
        const std::vector<double> trunc = enumerate_distribution_truncated(
            u, input, CutoffPolicy{1, xi}, configs);
        for (std::size_t i = 0; i < classical.size(); ++i) {
            REQUIRE(std::abs(trunc[i] - classical[i]) < 1e-12);
        }
    }
}

TEST_CASE("raw truncated values carry unit total mass") {
    const Interferometer u = haar_random(5, 47);
    const InputSpec input = InputSpec::first_ports(4);
    for (const double xi : {0.7, 1.0}) {
        for (const int k : {1, 2, 3}) {
            const std::vector<double> raw =
                enumerate_distribution_truncated(u, input, CutoffPolicy{k, xi});
            KahanSum<double> total;
            for (const double p : raw) {
                total.add(p);
            }
            REQUIRE(std::abs(total.get() - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("truncated probabilities match the filtered double sum") {
    for (const int n : {3, 4}) {
        const int dim = n + 1;
        const Interferometer u = haar_random(dim, 51 + static_cast<std::uint64_t>(n));
        const InputSpec input = InputSpec::first_ports(n);
        const ConfigurationList configs = enumerate_configurations(n, dim);
        Rng pick(13);
        for (int trial = 0; trial < 3; ++trial) {
            const std::vector<int> m = configs.get(
                static_cast<long long>(pick.below(static_cast<std::uint64_t>(configs.count))));
            const CMat r = reference_transfer(u, input, m);
            const double norm = configuration_factorial(m);
            for (int k = 1; k <= n; ++k) {
                const double expected = reference_truncated_raw(r, 0.8, k) / norm;
                const double actual =
                    output_probability_truncated(u, input, m, CutoffPolicy{k, 0.8}).value;
                REQUIRE(std::abs(actual - expected) < 1e-10 * std::max(1.0, std::abs(expected)));
            }
        }
    }
}

TEST_CASE("subset probability equals the mass of configurations inside") {
    const Interferometer u = haar_random(6, 61);
    const InputSpec input = InputSpec::first_ports(3);
    const ConfigurationList configs = enumerate_configurations(3, 6);
    for (const double xi : {0.5, 1.0}) {
        const std::vector<double> exact = enumerate_distribution(u, input, xi, configs);
        const std::vector<double> trunc =
            enumerate_distribution_truncated(u, input, CutoffPolicy{2, xi}, configs);
        for (const PortSubset& omega :
             {PortSubset{{2, 4, 6}}, PortSubset{{1}}, PortSubset::all_but(1, 6),
              PortSubset::all(6)}) {
            const double direct = subset_probability(u, input, omega, xi).value;
            REQUIRE(std::abs(direct - sum_over_subset(configs, exact, omega)) < 1e-9);
            const double direct_trunc =
                truncated_subset_probability(u, input, omega, CutoffPolicy{2, xi}).value;
            REQUIRE(std::abs(direct_trunc - sum_over_subset(configs, trunc, omega)) < 1e-9);
        }
        REQUIRE(subset_probability(u, input, PortSubset::all(6), xi).value ==
                Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("monte carlo subset estimate brackets the exact value") {
    const Interferometer u = haar_random(6, 67);
    const InputSpec input = InputSpec::first_ports(4);
    const PortSubset omega = PortSubset::all_but(1, 6);
    const double truth = subset_probability(u, input, omega, 0.9).value;
    const ProbabilityValue estimate =
        subset_probability_estimate(u, input, omega, 0.9, 20000, 3);
    REQUIRE(estimate.kind == ProbabilityValue::Kind::MonteCarlo);
    REQUIRE(estimate.std_error > 0.0);
    REQUIRE(std::abs(estimate.value - truth) < 5.0 * estimate.std_error);
    const ProbabilityValue again = subset_probability_estimate(u, input, omega, 0.9, 20000, 3);
    REQUIRE(again.value == estimate.value);
}

TEST_CASE("port-1 gap agrees with the subset definition and the distributions") {
    const Interferometer u = haar_random(5, 71);
    const InputSpec input = InputSpec::first_ports(4);
    const CutoffPolicy policy{2, 0.9};
    const double gap = delta_p1(u, input, 0.9, policy);
    const PortSubset omega = PortSubset::all_but(1, 5);
    const double direct = subset_probability(u, input, omega, 0.9).value -
                          truncated_subset_probability(u, input, omega, policy).value;
    REQUIRE(gap == Catch::Approx(direct).margin(1e-13));

    const ConfigurationList configs = enumerate_configurations(4, 5);
    const std::vector<double> exact = enumerate_distribution(u, input, 0.9, configs);
    const std::vector<double> trunc =
        enumerate_distribution_truncated(u, input, policy, configs);
    double from_dists = 0.0;
    std::vector<int> m;
    for (long long i = 0; i < configs.count; ++i) {
        configs.copy_into(i, m);
        if (m[0] == 0) {
            from_dists += exact[static_cast<std::size_t>(i)] - trunc[static_cast<std::size_t>(i)];
        }
    }
    REQUIRE(gap == Catch::Approx(from_dists).margin(1e-10));
}

TEST_CASE("total variation report and subset lower bound") {
    const Interferometer u = haar_random(6, 73);
    const InputSpec input = InputSpec::first_ports(4);
    for (const double xi : {0.7, 1.0}) {
        for (const int k : {1, 2}) {
            const CutoffPolicy policy{k, xi};
            const TvReport report = tv_distance_exact(u, input, xi, policy);
            REQUIRE(report.tv >= 0.0);
            REQUIRE(report.cutoff == k);
            REQUIRE(report.config_count == configuration_count(4, 6).convert_to<long long>());
            REQUIRE(report.sign_split_gap == Catch::Approx(report.tv).margin(1e-12));

            Rng rng(static_cast<std::uint64_t>(1000 * k) + (xi < 1.0 ? 7 : 8));
            for (int trial = 0; trial < 20; ++trial) {
                std::vector<int> ports;
                while (ports.empty()) {
                    ports.clear();
                    for (int l = 1; l <= 6; ++l) {
                        if (rng.below(2) == 1) {
                            ports.push_back(l);
                        }
                    }
                }
                const PortSubset omega{ports};
                const double gap = subset_probability(u, input, omega, xi).value -
                                   truncated_subset_probability(u, input, omega, policy).value;
                REQUIRE(report.tv >= std::abs(gap) - 1e-12);
            }
        }
    }
}

TEST_CASE("overlap passed alongside an inconsistent policy is rejected") {
    const Interferometer u = haar_random(4, 79);
    const InputSpec input = InputSpec::first_ports(3);
    REQUIRE_THROWS_AS(delta_p1(u, input, 0.7, CutoffPolicy{1, 0.9}), invalid_argument_error);
    REQUIRE_THROWS_AS(tv_distance_exact(u, input, 0.7, CutoffPolicy{1, 0.9}),
                      invalid_argument_error);
}

TEST_CASE("lossy model reduces to the lossless one without noise") {
    const Interferometer u = haar_random(4, 83);
    const InputSpec input = InputSpec::first_ports(3);
    const ConfigurationList configs = enumerate_configurations(3, 4);
    const NoiseParams clean{0.8, 1.0, 0.0};
    for (long long i = 0; i < configs.count; ++i) {
        const std::vector<int> m = configs.get(i);
        const double lossless = output_probability(u, input, m, 0.8).value;
        REQUIRE(lossy_dark_probability(u, input, m, clean) ==
                Catch::Approx(lossless).margin(1e-13));
    }
}

TEST_CASE("lossy probabilities sum to one over all photon totals") {
    const Interferometer u = haar_random(3, 89);
    const InputSpec input = InputSpec::first_ports(2);
    const NoiseParams noise{0.6, 0.7, 0.0};
    KahanSum<double> total;
    for (int count = 0; count <= 2; ++count) {
        const ConfigurationList configs = enumerate_configurations(count, 3);
        for (long long i = 0; i < configs.count; ++i) {
            total.add(lossy_dark_probability(u, input, configs.get(i), noise));
        }
    }
    REQUIRE(std::abs(total.get() - 1.0) < 1e-10);
}

TEST_CASE("lossy probabilities with dark counts: closed forms and total mass") {
    const Interferometer u = haar_random(2, 97);
    const InputSpec input = InputSpec::first_ports(1);
    const double eta = 0.8;
    const double nu = 0.3;
    const NoiseParams noise{1.0, eta, nu};
    const double survive = eta * eta;
    const double p00 = (1.0 - survive) * std::exp(-2.0 * nu);
    REQUIRE(lossy_dark_probability(u, input, {0, 0}, noise) ==
            Catch::Approx(p00).margin(1e-13));
    const double abs00 = std::norm(u.matrix(0, 0));
    const double p10 = std::exp(-2.0 * nu) * (survive * abs00 + (1.0 - survive) * nu);
    REQUIRE(lossy_dark_probability(u, input, {1, 0}, noise) ==
            Catch::Approx(p10).margin(1e-13));
    const double p20 =
        std::exp(-2.0 * nu) * (survive * abs00 * nu + (1.0 - survive) * nu * nu / 2.0);
    REQUIRE(lossy_dark_probability(u, input, {2, 0}, noise) ==
            Catch::Approx(p20).margin(1e-13));

    KahanSum<double> total;
    for (int a = 0; a <= 12; ++a) {
        for (int b = 0; b <= 12; ++b) {
            total.add(lossy_dark_probability(u, input, {a, b}, noise));
        }
    }
    REQUIRE(std::abs(total.get() - 1.0) < 1e-9);
}

TEST_CASE("size caps reject oversized requests") {
    const Interferometer u = haar_random(20, 3);
    InputSpec big;
    big.n_bosons = 17;
    for (int p = 1; p <= 17; ++p) {
        big.input_ports.push_back(p);
    }
    std::vector<int> m(20, 0);
    m[0] = 17;
    REQUIRE_THROWS_AS(output_probability(u, big, m, 0.5), size_limit_error);
    REQUIRE_THROWS_AS(enumerate_configurations(30, 30), size_limit_error);

    InputSpec eleven;
    eleven.n_bosons = 11;
    for (int p = 1; p <= 11; ++p) {
        eleven.input_ports.push_back(p);
    }
    const Interferometer u11 = haar_random(11, 4);
    std::vector<int> m11(11, 0);
    m11[0] = 11;
    REQUIRE_THROWS_AS(
        lossy_dark_probability(u11, eleven, m11, NoiseParams{1.0, 0.9, 0.0}),
        size_limit_error);
}
