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

#ifndef BOSONCUT_EXPERIMENT_HPP
#define BOSONCUT_EXPERIMENT_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bosoncut/cycle_combinatorics.hpp"
#include "bosoncut/errors.hpp"
#include "bosoncut/interferometer.hpp"
#include "bosoncut/io_util.hpp"
#include "bosoncut/noise_bounds.hpp"
#include "bosoncut/probability.hpp"
#include "bosoncut/samplers.hpp"

namespace bosoncut {

/// Largest record count run_experiment will draw per dataset.
inline constexpr long long kExperimentSampleCap = 5000000LL;

/// Largest photon number accepted in census tables.
inline constexpr int kCensusBosonCap = 5000;

/// Parses "p/q", an integer, or a decimal string into an exact rational.
inline BigRational parse_rational(const std::string& text) {
    const auto fail = [&text]() {
        return validation_error("cannot parse '" + text + "' as a rational number");
    };
    if (text.empty()) {
        throw fail();
    }
    try {
        const std::size_t slash = text.find('/');
        if (slash != std::string::npos) {
            const BigInt num(text.substr(0, slash));
            const BigInt den(text.substr(slash + 1));
            if (den == 0) {
                throw fail();
            }
            return BigRational(num, den);
        }
        const std::size_t dot = text.find('.');
        if (dot == std::string::npos) {
            return BigRational(BigInt(text));
        }
        const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        BigInt den = 1;
        for (std::size_t i = dot + 1; i < text.size(); ++i) {
            den *= 10;
        }
        return BigRational(BigInt(digits), den);
    } catch (const validation_error&) {
        throw;
    } catch (const std::exception&) {
        throw fail();
    }
}

/**
 * Declarative description of one distinguishing experiment: the
 * interferometer family, the input, the noise, the cutoff order, the
 * no-click subset and the sampling plan.  samples = 0 means "use the
 * analytic sample budget".
 */
struct ExperimentConfig {
    int schema_version = 1;
    int dim = 0;
    UnitaryKind kind = UnitaryKind::HaarRandom;
    std::uint64_t unitary_seed = 0;
    int n_bosons = 0;
    std::optional<std::vector<int>> input_ports;
    double xi = 1.0;
    double eta = 1.0;
    double nu = 0.0;
    int k_max = 1;
    std::optional<std::vector<int>> omega;
    long long samples = 0;
    double target_sigmas = 5.0;
    std::uint64_t sample_seed = 0;
    std::string out_dir;

    std::vector<int> resolved_input_ports() const {
        return input_ports ? *input_ports : InputSpec::first_ports(n_bosons).input_ports;
    }

    std::vector<int> resolved_omega() const {
        return omega ? *omega : PortSubset::all_but(1, dim).ports;
    }

    void validate() const {
        if (schema_version != 1) {
            throw validation_error("experiment config: unsupported schema_version");
        }
        if (kind == UnitaryKind::Explicit) {
            throw validation_error("experiment config: kind must be haar, fourier or balanced");
        }
        if (dim < 1 || (kind == UnitaryKind::BalancedPort && dim < 2)) {
            throw validation_error("experiment config: dim is too small for the chosen kind");
        }
        if (n_bosons < 1) {
            throw validation_error("experiment config: n_bosons must be >= 1");
        }
        if (n_bosons > kExactConfigBosonCap) {
            throw size_limit_error("experiment config: n_bosons exceeds the exact cap");
        }
        InputSpec input;
        input.n_bosons = n_bosons;
        input.input_ports = resolved_input_ports();
        input.validate_against(dim);
        NoiseParams noise{xi, eta, nu};
        noise.validate();
        if (k_max < 1) {
            throw validation_error("experiment config: k_max must be >= 1");
        }
        PortSubset subset{resolved_omega()};
        subset.validate_against(dim);
        if (samples < 0) {
            throw validation_error("experiment config: samples must be >= 0");
        }
        if (samples > kExperimentSampleCap) {
            throw size_limit_error("experiment config: samples exceeds the per-run cap");
        }
        if (!(target_sigmas > 0.0)) {
            throw validation_error("experiment config: target_sigmas must be > 0");
        }
        if (out_dir.empty()) {
            throw validation_error("experiment config: out_dir must not be empty");
        }
    }

    /// Canonical form with defaults materialized; out_dir is excluded so
    /// the hash identifies the experiment, not where it was written.
    nlohmann::json canonical_json() const {
        return nlohmann::json{
            {"schema_version", schema_version},
            {"dim", dim},
            {"kind", to_string(kind)},
            {"unitary_seed", unitary_seed},
            {"n_bosons", n_bosons},
            {"input_ports", resolved_input_ports()},
            {"xi", xi},
            {"eta", eta},
            {"nu", nu},
            {"k_max", k_max},
            {"omega", resolved_omega()},
            {"samples", samples},
            {"target_sigmas", target_sigmas},
            {"sample_seed", sample_seed},
        };
    }

    std::string hash() const { return fnv1a64_hex(canonical_json().dump()); }
};

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw validation_error("experiment config must be a JSON object");
    }
    static const std::vector<std::string> known{
        "schema_version", "dim", "kind", "unitary_seed", "n_bosons", "input_ports",
        "xi", "eta", "nu", "k_max", "omega", "samples",
        "target_sigmas", "sample_seed", "out_dir"};
    for (const auto& item : doc.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
            throw validation_error("experiment config: unknown field '" + item.key() + "'");
        }
    }
    const auto need = [&doc](const char* key) -> const nlohmann::json& {
        if (!doc.contains(key)) {
            throw validation_error(std::string("experiment config is missing field '") + key +
                                   "'");
        }
        return doc.at(key);
    };
    const auto as_int = [&need](const char* key) {
        const nlohmann::json& value = need(key);
        if (!value.is_number_integer()) {
            throw validation_error(std::string("experiment config field '") + key +
                                   "' must be an integer");
        }
        return value.get<long long>();
    };
    const auto as_seed = [&need](const char* key) {
        const nlohmann::json& value = need(key);
        if (!value.is_number_integer() || (value.is_number_integer() && !value.is_number_unsigned() &&
                                           value.get<long long>() < 0)) {
            throw validation_error(std::string("experiment config field '") + key +
                                   "' must be a nonnegative integer");
        }
        return value.get<std::uint64_t>();
    };
    const auto as_double = [&need](const char* key) {
        const nlohmann::json& value = need(key);
        if (!value.is_number()) {
            throw validation_error(std::string("experiment config field '") + key +
                                   "' must be a number");
        }
        return value.get<double>();
    };
    const auto as_ports = [&need](const char* key) {
        const nlohmann::json& value = need(key);
        if (!value.is_array()) {
            throw validation_error(std::string("experiment config field '") + key +
                                   "' must be an array of port numbers");
        }
        std::vector<int> ports;
        for (const auto& entry : value) {
            if (!entry.is_number_integer()) {
                throw validation_error(std::string("experiment config field '") + key +
                                       "' must contain integers only");
            }
            ports.push_back(entry.get<int>());
        }
        return ports;
    };

    ExperimentConfig config;
    config.schema_version = static_cast<int>(as_int("schema_version"));
    config.dim = static_cast<int>(as_int("dim"));
    const nlohmann::json& kind = need("kind");
    if (!kind.is_string()) {
        throw validation_error("experiment config field 'kind' must be a string");
    }
    config.kind = unitary_kind_from_string(kind.get<std::string>());
    config.n_bosons = static_cast<int>(as_int("n_bosons"));
    config.k_max = static_cast<int>(as_int("k_max"));
    if (config.kind != UnitaryKind::Fourier || doc.contains("unitary_seed")) {
        config.unitary_seed = as_seed("unitary_seed");
    }
    if (doc.contains("input_ports")) {
        config.input_ports = as_ports("input_ports");
    }
    if (doc.contains("xi")) {
        config.xi = as_double("xi");
    }
    if (doc.contains("eta")) {
        config.eta = as_double("eta");
    }
    if (doc.contains("nu")) {
        config.nu = as_double("nu");
    }
    if (doc.contains("omega")) {
        config.omega = as_ports("omega");
    }
    if (doc.contains("samples")) {
        config.samples = as_int("samples");
    }
    if (doc.contains("target_sigmas")) {
        config.target_sigmas = as_double("target_sigmas");
    }
    if (doc.contains("sample_seed")) {
        config.sample_seed = as_seed("sample_seed");
    }
    const nlohmann::json& out_dir = need("out_dir");
    if (!out_dir.is_string()) {
        throw validation_error("experiment config field 'out_dir' must be a string");
    }
    config.out_dir = out_dir.get<std::string>();
    config.validate();
    return config;
}

inline ExperimentConfig experiment_config_from_file(const std::filesystem::path& path) {
    const std::string content = read_text_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(content);
    } catch (const nlohmann::json::exception& error) {
        throw validation_error("experiment config '" + path.string() + "' is not valid JSON: " +
                               error.what());
    }
    return experiment_config_from_json(doc);
}

inline std::string iso_utc_now() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

namespace detail {

inline std::string format_full(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

inline std::string format_short(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

} // namespace detail

struct ExperimentResult {
    ExperimentConfig config;
    std::string config_hash;
    Interferometer interferometer;
    BoundReport bound;
    double p_omega_exact = 0.0;
    double p_omega_truncated = 0.0;
    double delta_p_omega = 0.0;
    double truncated_clamped_mass = 0.0;
    long long sample_count = 0;
    DistinguisherResult distinguisher;
    nlohmann::json summary;
    std::filesystem::path out_dir;
    std::filesystem::path interferometer_path;
    std::filesystem::path exact_samples_path;
    std::filesystem::path truncated_samples_path;
    std::filesystem::path summary_path;
    std::filesystem::path csv_path;
};

/**
 * Runs one full distinguishing experiment: builds the interferometer,
 * evaluates the analytic no-click probabilities and the transport bound,
 * draws an exact dataset and a truncated dataset, runs the z-test, and
 * writes interferometer.json, exact.jsonl, truncated.jsonl, summary.json
 * and summary.csv into out_dir.
 *
 * Everything except the generated_at stamp is a pure function of the
 * config; summary_hash covers exactly that deterministic part.
 */
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();

    ExperimentResult result;
    result.config = config;
    result.config_hash = config.hash();

    switch (config.kind) {
    case UnitaryKind::HaarRandom:
        result.interferometer = haar_random(config.dim, config.unitary_seed);
        break;
    case UnitaryKind::Fourier:
        result.interferometer = fourier(config.dim);
        break;
    case UnitaryKind::BalancedPort:
        result.interferometer = balanced_port(haar_random(config.dim - 1, config.unitary_seed));
        break;
    case UnitaryKind::Explicit:
        throw validation_error("experiment config: kind must be haar, fourier or balanced");
    }

    InputSpec input;
    input.n_bosons = config.n_bosons;
    input.input_ports = config.resolved_input_ports();
    const PortSubset omega{config.resolved_omega()};
    const NoiseParams noise{config.xi, config.eta, config.nu};
    const CutoffPolicy policy{config.k_max, config.xi};
    const double rho = input.density(config.dim);

    result.bound.rho = rho;
    result.bound.k = config.k_max;
    result.bound.n = config.n_bosons;
    result.bound.w1 = w1_bound(noise, rho, config.k_max);
    result.bound.rel_variance = relative_variance(rho, config.k_max, config.n_bosons);
    result.bound.regime = classify_regime(rho, config.n_bosons);
    result.bound.target_sigmas = config.target_sigmas;
    if (config.samples == 0) {
        result.bound.budget = sample_budget(noise, rho, config.k_max, config.n_bosons,
                                            config.target_sigmas);
    } else {
        try {
            result.bound.budget = sample_budget(noise, rho, config.k_max, config.n_bosons,
                                                config.target_sigmas);
        } catch (const size_limit_error&) {
            result.bound.budget = -1;
        }
    }

    result.p_omega_exact =
        subset_probability(result.interferometer, input, omega, config.xi).value;
    result.p_omega_truncated =
        truncated_subset_probability(result.interferometer, input, omega, policy).value;
    result.delta_p_omega = result.p_omega_exact - result.p_omega_truncated;

    result.sample_count = config.samples > 0 ? config.samples : result.bound.budget;
    if (result.sample_count > kExperimentSampleCap) {
        throw size_limit_error("run_experiment: the analytic sample budget " +
                               std::to_string(result.sample_count) +
                               " exceeds the per-run cap; set samples explicitly");
    }

    ExactSampler exact_sampler(result.interferometer, input, noise);
    const SampleSet exact_set =
        exact_sampler.run(result.sample_count, derive_stream_seed(config.sample_seed, 1));
    TruncatedSampler truncated_sampler(result.interferometer, input, policy);
    result.truncated_clamped_mass = truncated_sampler.clamped_mass();
    const SampleSet truncated_set =
        truncated_sampler.run(result.sample_count, derive_stream_seed(config.sample_seed, 2));

    result.distinguisher = distinguish(exact_set, truncated_set, omega, config.target_sigmas);

    result.out_dir = std::filesystem::path(config.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(result.out_dir, ec);
    if (ec) {
        throw io_error("cannot create output directory '" + result.out_dir.string() +
                       "': " + ec.message());
    }
    result.interferometer_path = result.out_dir / "interferometer.json";
    result.exact_samples_path = result.out_dir / "exact.jsonl";
    result.truncated_samples_path = result.out_dir / "truncated.jsonl";
    result.summary_path = result.out_dir / "summary.json";
    result.csv_path = result.out_dir / "summary.csv";

    atomic_write_text(result.interferometer_path, to_json(result.interferometer).dump(2) + "\n");
    write_sample_set(exact_set, result.exact_samples_path);
    write_sample_set(truncated_set, result.truncated_samples_path);

    nlohmann::json summary{
        {"format", "bosoncut-summary"},
        {"version", 1},
        {"config", config.canonical_json()},
        {"config_hash", result.config_hash},
        {"instance_hash", exact_set.instance_hash},
        {"analytic",
         {
             {"density", rho},
             {"regime", to_string(result.bound.regime)},
             {"w1_lower_bound", result.bound.w1},
             {"relative_variance", result.bound.rel_variance},
             {"sample_budget",
              result.bound.budget >= 0 ? nlohmann::json(result.bound.budget)
                                       : nlohmann::json(nullptr)},
             {"p_omega_exact", result.p_omega_exact},
             {"p_omega_truncated", result.p_omega_truncated},
             {"delta_p_omega", result.delta_p_omega},
             {"truncated_clamped_mass", result.truncated_clamped_mass},
         }},
        {"sampling",
         {
             {"count", result.sample_count},
             {"exact",
              {
                  {"hits", result.distinguisher.a.hits},
                  {"p_hat", result.distinguisher.a.p_hat},
                  {"std_error", result.distinguisher.a.std_error},
              }},
             {"truncated",
              {
                  {"hits", result.distinguisher.b.hits},
                  {"p_hat", result.distinguisher.b.p_hat},
                  {"std_error", result.distinguisher.b.std_error},
              }},
             {"z_score", result.distinguisher.z_score},
             {"threshold_sigmas", result.distinguisher.threshold_sigmas},
             {"verdict", to_string(result.distinguisher.verdict)},
         }},
    };
    summary["summary_hash"] = fnv1a64_hex(summary.dump());
    summary["generated_at"] = iso_utc_now();
    result.summary = summary;
    atomic_write_text(result.summary_path, summary.dump(2) + "\n");

    std::ostringstream csv;
    csv << "model,count,hits,p_hat,std_error,analytic_value\n";
    csv << "exact," << result.sample_count << ',' << result.distinguisher.a.hits << ','
        << detail::format_full(result.distinguisher.a.p_hat) << ','
        << detail::format_full(result.distinguisher.a.std_error) << ','
        << detail::format_full(result.p_omega_exact) << '\n';
    csv << "truncated," << result.sample_count << ',' << result.distinguisher.b.hits << ','
        << detail::format_full(result.distinguisher.b.p_hat) << ','
        << detail::format_full(result.distinguisher.b.std_error) << ','
        << detail::format_full(result.p_omega_truncated) << '\n';
    atomic_write_text(result.csv_path, csv.str());

    return result;
}

/**
 * Writes a CSV scanning the photon number at a fixed cutoff order: the
 * exact surviving fraction of relative permutations, its asymptotic
 * bound, and (for xi < 1) the weighted ratio together with the chain of
 * quantities that dominate it.  Values far outside double range are
 * carried by the log10 columns.
 */
inline void census_tables(int n_lo, int n_hi, int k, const BigRational& xi,
                          const std::filesystem::path& out_path) {
    if (n_lo < 1 || n_hi < n_lo) {
        throw invalid_argument_error("census_tables requires 1 <= n_lo <= n_hi");
    }
    if (n_hi > kCensusBosonCap) {
        throw size_limit_error("census_tables: n_hi exceeds the census cap");
    }
    if (k < 1) {
        throw invalid_argument_error("census_tables requires k >= 1");
    }
    if (!(xi > 0) || xi > 1) {
        throw invalid_argument_error("census_tables requires xi in (0, 1]");
    }
    const bool weighted = xi != 1;
    const double log10_scale = std::log(10.0);
    const double log_xi = log_of(xi);

    const std::vector<BigInt> counts = count_restricted_table(n_hi, k);

    // Weighted restricted sums via the cycle recurrence with t_1 = 1/xi
    // and unit weights up to k; the xi^n prefactors of numerator and
    // denominator cancel in the ratio.
    std::vector<BigRational> weighted_table;
    if (weighted) {
        const int cap = std::min(n_hi, kWeightedRatioExactCap);
        std::vector<BigRational> weights(static_cast<std::size_t>(k), BigRational(1));
        weights[0] = BigRational(1) / xi;
        weighted_table = cycle_sum_table(cap, weights);
    }

    std::ostringstream csv;
    csv << "n,fraction,fraction_log10,bound,bound_log10,bound_vacuous,"
           "weighted_ratio,weighted_ratio_log10,weighted_middle,weighted_middle_log10,"
           "weighted_bound,weighted_bound_log10,weighted_bound_vacuous\n";

    BigInt fact = 1;
    BigRational xi_power_n = 1;
    // Partial sums of sum_j (1/xi - 1)^j / j!, the series whose product
    // with xi^n n! is the full weighted sum over all permutations.
    BigRational series = 1;
    BigRational series_term = 1;
    const BigRational series_base = BigRational(1) / xi - 1;
    for (int n = 1; n <= n_hi; ++n) {
        fact *= n;
        if (weighted) {
            xi_power_n *= xi;
            series_term = series_term * series_base / n;
            series += series_term;
        }
        if (n < n_lo) {
            continue;
        }
        const BigRational fraction(counts[static_cast<std::size_t>(n)], fact);
        const double log_fraction = log_of(fraction);
        const AsymptoticBound bound = fraction_asymptotic_bound(n, k);
        csv << n << ',' << detail::format_short(to_double(fraction)) << ','
            << detail::format_short(log_fraction / log10_scale) << ','
            << detail::format_short(bound.value) << ','
            << detail::format_short(bound.log_value / log10_scale) << ','
            << (bound.vacuous ? 1 : 0) << ',';
        if (!weighted) {
            csv << detail::format_short(to_double(fraction)) << ','
                << detail::format_short(log_fraction / log10_scale) << ','
                << detail::format_short(to_double(fraction)) << ','
                << detail::format_short(log_fraction / log10_scale) << ','
                << detail::format_short(bound.value) << ','
                << detail::format_short(bound.log_value / log10_scale) << ','
                << (bound.vacuous ? 1 : 0) << '\n';
            continue;
        }
        if (n <= kWeightedRatioExactCap) {
            const BigRational ratio =
                weighted_table[static_cast<std::size_t>(n)] / (BigRational(fact) * series);
            csv << detail::format_short(to_double(ratio)) << ','
                << detail::format_short(log_of(ratio) / log10_scale) << ',';
        } else {
            csv << ",,";
        }
        const BigRational middle = fraction / xi_power_n;
        const double log_middle = log_of(middle);
        const AsymptoticBound wbound = weighted_fraction_asymptotic_bound(n, k, std::exp(log_xi));
        csv << detail::format_short(to_double(middle)) << ','
            << detail::format_short(log_middle / log10_scale) << ','
            << detail::format_short(wbound.value) << ','
            << detail::format_short(wbound.log_value / log10_scale) << ','
            << (wbound.vacuous ? 1 : 0) << '\n';
    }
    atomic_write_text(out_path, csv.str());
}

} // namespace bosoncut

#endif
