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

#ifndef BOSONCUT_NOISE_BOUNDS_HPP
#define BOSONCUT_NOISE_BOUNDS_HPP

#include <cmath>
#include <cstdint>
#include <string>

#include "bosoncut/errors.hpp"

namespace bosoncut {

/**
 * Uniform noise model: xi is the pairwise overlap of the photons'
 * internal states (xi = 1 means fully indistinguishable), eta the
 * amplitude transmission coefficient (a photon survives the device with
 * probability eta^2), and nu the Poisson dark-count rate per detector.
 */
struct NoiseParams {
    double xi = 1.0;
    double eta = 1.0;
    double nu = 0.0;

    void validate() const {
        if (!(xi > 0.0 && xi <= 1.0)) {
            throw invalid_argument_error("NoiseParams: xi must lie in (0, 1]");
        }
        if (!(eta > 0.0 && eta <= 1.0)) {
            throw invalid_argument_error("NoiseParams: eta must lie in (0, 1]");
        }
        if (!(nu >= 0.0) || !std::isfinite(nu)) {
            throw invalid_argument_error("NoiseParams: nu must be finite and >= 0");
        }
    }
};

/**
 * Haar-averaged lower bound on the total variation distance between the
 * noisy N-photon output distribution and its cycle-truncated
 * approximation of order k, realized by the no-click probability gap on
 * one output port:
 *
 *   W1 = (xi eta rho)^(k+1) / (1 + xi eta rho) * exp(-1 - nu - eta rho),
 *
 * with rho = N / M the photon density.  Valid in the regime k << sqrt(N).
 */
inline double w1_bound(const NoiseParams& noise, double rho, int k) {
    noise.validate();
    if (!(rho > 0.0 && rho <= 1.0)) {
        throw invalid_argument_error("w1_bound requires rho in (0, 1]");
    }
    if (k < 1) {
        throw invalid_argument_error("w1_bound requires k >= 1");
    }
    const double base = noise.xi * noise.eta * rho;
    double power = 1.0;
    for (int i = 0; i < k + 1; ++i) {
        power *= base;
    }
    return power / (1.0 + base) * std::exp(-1.0 - noise.nu - noise.eta * rho);
}

/// Haar relative variance of the no-click gap, (1 - rho) (k+1)^2 / N.
/// Small values mean the W1 bound holds for almost every interferometer.
inline double relative_variance(double rho, int k, int n) {
    if (!(rho > 0.0 && rho <= 1.0)) {
        throw invalid_argument_error("relative_variance requires rho in (0, 1]");
    }
    if (k < 1) {
        throw invalid_argument_error("relative_variance requires k >= 1");
    }
    if (n < 1) {
        throw invalid_argument_error("relative_variance requires n >= 1");
    }
    const double kp = static_cast<double>(k + 1);
    return (1.0 - rho) * kp * kp / static_cast<double>(n);
}

enum class DensityRegime { NoCollision, Intermediate, StrongCollision };

inline std::string to_string(DensityRegime regime) {
    switch (regime) {
    case DensityRegime::NoCollision: return "no-collision";
    case DensityRegime::Intermediate: return "intermediate";
    case DensityRegime::StrongCollision: return "strong-collision";
    }
    throw invalid_argument_error("unknown density regime");
}

/// rho < 2/sqrt(n) puts the experiment in the no-collision regime;
/// otherwise rho > 0.2 counts as strong collision and anything between
/// as intermediate.
inline DensityRegime classify_regime(double rho, int n) {
    if (!(rho > 0.0 && rho <= 1.0)) {
        throw invalid_argument_error("classify_regime requires rho in (0, 1]");
    }
    if (n < 1) {
        throw invalid_argument_error("classify_regime requires n >= 1");
    }
    if (rho < 2.0 / std::sqrt(static_cast<double>(n))) {
        return DensityRegime::NoCollision;
    }
    if (rho > 0.2) {
        return DensityRegime::StrongCollision;
    }
    return DensityRegime::Intermediate;
}

/**
 * Smallest number of device runs T such that target_sigmas / sqrt(T),
 * the statistical error of an estimated subset probability at the chosen
 * confidence, drops to half the W1 gap or less:
 *
 *   T = ceil( (2 target_sigmas / W1)^2 ).
 */
inline long long sample_budget(const NoiseParams& noise, double rho, int k, int n,
                               double target_sigmas = 5.0) {
    if (!(target_sigmas > 0.0)) {
        throw invalid_argument_error("sample_budget requires target_sigmas > 0");
    }
    if (n < 1) {
        throw invalid_argument_error("sample_budget requires n >= 1");
    }
    const double w1 = w1_bound(noise, rho, k);
    const double ratio = 2.0 * target_sigmas / w1;
    const double needed = ratio * ratio;
    if (!(needed < 9.0e18)) {
        throw size_limit_error("sample_budget: required run count overflows a 64-bit counter");
    }
    return static_cast<long long>(std::ceil(needed));
}

/// Everything the planning step of an experiment needs in one place.
struct BoundReport {
    double rho = 0.0;
    int k = 0;
    int n = 0;
    double w1 = 0.0;
    double rel_variance = 0.0;
    DensityRegime regime = DensityRegime::Intermediate;
    long long budget = 0;
    double target_sigmas = 0.0;
};

inline BoundReport make_bound_report(const NoiseParams& noise, double rho, int k, int n,
                                     double target_sigmas = 5.0) {
    BoundReport report;
    report.rho = rho;
    report.k = k;
    report.n = n;
    report.w1 = w1_bound(noise, rho, k);
    report.rel_variance = relative_variance(rho, k, n);
    report.regime = classify_regime(rho, n);
    report.budget = sample_budget(noise, rho, k, n, target_sigmas);
    report.target_sigmas = target_sigmas;
    return report;
}

} // namespace bosoncut

#endif
