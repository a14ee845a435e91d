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

// Distinguishes exact interference from its low-order approximation on a
// balanced-port interferometer using only no-click statistics on the
// first output port, at the analytically predicted sample budget.

#include <cstdio>

#include "bosoncut/bosoncut.hpp"

int main() {
    using namespace bosoncut;

    const int dim = 6;
    const Interferometer u = balanced_port(haar_random(dim - 1, 20260822));
    const InputSpec input = InputSpec::first_ports(dim);
    const PortSubset omega = PortSubset::all_but(1, dim);
    const NoiseParams noise{0.9, 1.0, 0.0};
    const int k = 1;

    const double rho = input.density(dim);
    const double w1 = w1_bound(noise, rho, k);
    const long long budget = sample_budget(noise, rho, k, input.n_bosons);
    std::printf("ports %d, photons %d, overlap %.2f, cutoff order %d\n", dim, input.n_bosons,
                noise.xi, k);
    std::printf("transport lower bound on the port-1 gap: %.6f\n", w1);
    std::printf("analytic 5-sigma sample budget: %lld records per model\n", budget);

    const double p_exact = subset_probability(u, input, omega, noise.xi).value;
    const double p_trunc =
        truncated_subset_probability(u, input, omega, CutoffPolicy{k, noise.xi}).value;
    std::printf("no-click probability on port 1: exact %.6f, order-%d %.6f, gap %.6f\n",
                p_exact, k, p_trunc, p_exact - p_trunc);

    const SampleSet exact_set = sample_exact(u, input, noise, budget, 1);
    const SampleSet trunc_set =
        sample_truncated(u, input, CutoffPolicy{k, noise.xi}, budget, 2);
    const DistinguisherResult verdict = distinguish(exact_set, trunc_set, omega);
    std::printf("estimates: exact %.6f +- %.6f, truncated %.6f +- %.6f\n", verdict.a.p_hat,
                verdict.a.std_error, verdict.b.p_hat, verdict.b.std_error);
    std::printf("z = %.2f against a %.0f sigma threshold: %s\n", verdict.z_score,
                verdict.threshold_sigmas, to_string(verdict.verdict).c_str());
    return 0;
}
