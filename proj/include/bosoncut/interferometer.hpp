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

#ifndef BOSONCUT_INTERFEROMETER_HPP
#define BOSONCUT_INTERFEROMETER_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "bosoncut/errors.hpp"
#include "bosoncut/rng.hpp"

namespace bosoncut {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;

enum class UnitaryKind { HaarRandom, Fourier, BalancedPort, Explicit };

inline std::string to_string(UnitaryKind kind) {
    switch (kind) {
    case UnitaryKind::HaarRandom: return "haar";
    case UnitaryKind::Fourier: return "fourier";
    case UnitaryKind::BalancedPort: return "balanced";
    case UnitaryKind::Explicit: return "explicit";
    }
    throw invalid_argument_error("unknown unitary kind");
}

inline UnitaryKind unitary_kind_from_string(const std::string& name) {
    if (name == "haar") return UnitaryKind::HaarRandom;
    if (name == "fourier") return UnitaryKind::Fourier;
    if (name == "balanced") return UnitaryKind::BalancedPort;
    if (name == "explicit") return UnitaryKind::Explicit;
    throw validation_error("unknown unitary kind '" + name +
                           "' (expected haar, fourier, balanced or explicit)");
}

/// Largest entry of |U^H U - I|; zero for an exactly unitary matrix.
inline double unitarity_residual(const CMat& u) {
    if (u.rows() != u.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    const CMat gram = u.adjoint() * u;
    const Eigen::Index n = u.rows();
    double residual = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            const Complex expected = (r == c) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
            residual = std::max(residual, std::abs(gram(r, c) - expected));
        }
    }
    return residual;
}

/**
 * An M-port linear interferometer: the M x M unitary transfer matrix plus
 * the recipe that produced it, so instances can be serialized and later
 * regenerated or audited.
 */
struct Interferometer {
    int dim = 0;
    CMat matrix;
    UnitaryKind kind = UnitaryKind::Explicit;
    std::optional<std::uint64_t> seed;
};

/**
 * Haar-distributed random unitary.  A dim x dim matrix of independent
 * standard complex Gaussians is QR-factorized and the columns of Q are
 * rephased by the phases of the diagonal of R, which makes the
 * distribution exactly invariant under left and right unitary
 * multiplication.
 */
inline Interferometer haar_random(int dim, std::uint64_t seed) {
    if (dim < 1) {
        throw invalid_argument_error("haar_random requires dim >= 1");
    }
    Rng rng(seed);
    CMat ginibre(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            // Row-major fill order is part of the reproducibility contract.
            const double re = rng.normal();
            const double im = rng.normal();
            ginibre(r, c) = Complex(re, im) / std::sqrt(2.0);
        }
    }
    Eigen::HouseholderQR<CMat> qr(ginibre);
    CMat q = qr.householderQ();
    const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < dim; ++c) {
        const Complex diag = r(c, c);
        const double mag = std::abs(diag);
        const Complex phase = (mag > 0.0) ? diag / mag : Complex(1.0, 0.0);
        q.col(c) *= phase;
    }
    return Interferometer{dim, std::move(q), UnitaryKind::HaarRandom, seed};
}

/**
 * Discrete-Fourier interferometer.  With one-based port labels k, l the
 * entry is exp(2 i pi k l / M) / sqrt(M), so every entry of the first
 * column has modulus 1 / sqrt(M).
 */
inline Interferometer fourier(int dim) {
    if (dim < 1) {
        throw invalid_argument_error("fourier requires dim >= 1");
    }
    CMat f(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            const double angle =
                2.0 * M_PI * static_cast<double>((r + 1) * static_cast<long long>(c + 1)) /
                static_cast<double>(dim);
            f(r, c) = Complex(std::cos(angle), std::sin(angle)) / std::sqrt(static_cast<double>(dim));
        }
    }
    return Interferometer{dim, std::move(f), UnitaryKind::Fourier, std::nullopt};
}

/**
 * Interferometer of dimension M = inner.dim + 1 whose first column is
 * balanced across all output ports: U = F (1 (+) V) with F the Fourier
 * interferometer of dimension M and V the given inner unitary acting on
 * ports 2..M.  Since the direct sum leaves the first input port alone,
 * |U(k, 1)| = 1 / sqrt(M) for every output port k, whatever V is.
 */
inline Interferometer balanced_port(const Interferometer& inner) {
    if (inner.dim < 1) {
        throw invalid_argument_error("balanced_port requires an inner unitary with dim >= 1");
    }
    if (unitarity_residual(inner.matrix) > 1e-8) {
        throw invalid_argument_error("balanced_port requires a unitary inner matrix");
    }
    const int dim = inner.dim + 1;
    CMat block = CMat::Zero(dim, dim);
    block(0, 0) = Complex(1.0, 0.0);
    block.block(1, 1, inner.dim, inner.dim) = inner.matrix;
    const Interferometer f = fourier(dim);
    CMat u = f.matrix * block;
    return Interferometer{dim, std::move(u), UnitaryKind::BalancedPort, inner.seed};
}

/// Wraps an explicit matrix, checking unitarity.
inline Interferometer explicit_interferometer(const CMat& matrix, double tolerance = 1e-10) {
    if (matrix.rows() != matrix.cols() || matrix.rows() < 1) {
        throw invalid_argument_error("explicit interferometer matrix must be square and non-empty");
    }
    if (unitarity_residual(matrix) > tolerance) {
        throw validation_error("explicit interferometer matrix is not unitary within tolerance");
    }
    return Interferometer{static_cast<int>(matrix.rows()), matrix, UnitaryKind::Explicit,
                          std::nullopt};
}

inline nlohmann::json to_json(const Interferometer& interferometer) {
    nlohmann::json entries = nlohmann::json::array();
    for (int r = 0; r < interferometer.dim; ++r) {
        for (int c = 0; c < interferometer.dim; ++c) {
            const Complex value = interferometer.matrix(r, c);
            entries.push_back({value.real(), value.imag()});
        }
    }
    nlohmann::json out{
        {"dim", interferometer.dim},
        {"kind", to_string(interferometer.kind)},
        {"matrix", std::move(entries)},
    };
    if (interferometer.seed) {
        out["seed"] = *interferometer.seed;
    }
    return out;
}

inline Interferometer interferometer_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw validation_error("interferometer: expected a JSON object");
    }
    for (const char* field : {"dim", "kind", "matrix"}) {
        if (!doc.contains(field)) {
            throw validation_error(std::string("interferometer: missing field '") + field + "'");
        }
    }
    const int dim = doc.at("dim").get<int>();
    if (dim < 1) {
        throw validation_error("interferometer: dim must be >= 1");
    }
    const UnitaryKind kind = unitary_kind_from_string(doc.at("kind").get<std::string>());
    const auto& entries = doc.at("matrix");
    if (!entries.is_array() ||
        entries.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {
        throw validation_error("interferometer: matrix must hold dim*dim [re, im] pairs");
    }
    CMat matrix(dim, dim);
    std::size_t index = 0;
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c, ++index) {
            const auto& pair = entries.at(index);
            if (!pair.is_array() || pair.size() != 2) {
                throw validation_error("interferometer: matrix entries must be [re, im] pairs");
            }
            matrix(r, c) = Complex(pair.at(0).get<double>(), pair.at(1).get<double>());
        }
    }
    if (unitarity_residual(matrix) > 1e-10) {
        throw validation_error("interferometer: matrix is not unitary within 1e-10");
    }
    Interferometer result{dim, std::move(matrix), kind, std::nullopt};
    if (doc.contains("seed")) {
        result.seed = doc.at("seed").get<std::uint64_t>();
    }
    return result;
}

/**
 * The input side of an experiment: n_bosons single photons, one in each
 * of the listed (one-based, pairwise distinct) input ports.
 */
struct InputSpec {
    int n_bosons = 0;
    std::vector<int> input_ports;

    /// One photon in each of ports 1..n.
    static InputSpec first_ports(int n) {
        if (n < 1) {
            throw invalid_argument_error("InputSpec requires n_bosons >= 1");
        }
        InputSpec spec;
        spec.n_bosons = n;
        spec.input_ports.resize(static_cast<std::size_t>(n));
        std::iota(spec.input_ports.begin(), spec.input_ports.end(), 1);
        return spec;
    }

    void validate_against(int dim) const {
        if (n_bosons < 1) {
            throw invalid_argument_error("InputSpec: n_bosons must be >= 1");
        }
        if (n_bosons > dim) {
            throw invalid_argument_error("InputSpec: more bosons than ports");
        }
        if (input_ports.size() != static_cast<std::size_t>(n_bosons)) {
            throw invalid_argument_error("InputSpec: input_ports must list one port per boson");
        }
        std::vector<bool> seen(static_cast<std::size_t>(dim), false);
        for (const int port : input_ports) {
            if (port < 1 || port > dim) {
                throw invalid_argument_error("InputSpec: input port out of range");
            }
            if (seen[static_cast<std::size_t>(port - 1)]) {
                throw invalid_argument_error("InputSpec: duplicate input port");
            }
            seen[static_cast<std::size_t>(port - 1)] = true;
        }
    }

    /// Input density N / M.
    double density(int dim) const {
        return static_cast<double>(n_bosons) / static_cast<double>(dim);
    }
};

} // namespace bosoncut

#endif
