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

#ifndef BOSONCUT_SAMPLERS_HPP
#define BOSONCUT_SAMPLERS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bosoncut/errors.hpp"
#include "bosoncut/interferometer.hpp"
#include "bosoncut/io_util.hpp"
#include "bosoncut/noise_bounds.hpp"
#include "bosoncut/permanent.hpp"
#include "bosoncut/probability.hpp"
#include "bosoncut/rng.hpp"

namespace bosoncut {

enum class SampleModel { Exact, TruncatedCycles, KInterfering };

inline std::string to_string(SampleModel model) {
    switch (model) {
    case SampleModel::Exact: return "exact";
    case SampleModel::TruncatedCycles: return "truncated";
    case SampleModel::KInterfering: return "k-interfering";
    }
    throw invalid_argument_error("unknown sample model");
}

inline SampleModel sample_model_from_string(const std::string& name) {
    if (name == "exact") return SampleModel::Exact;
    if (name == "truncated" || name == "trunc") return SampleModel::TruncatedCycles;
    if (name == "k-interfering" || name == "kinterf") return SampleModel::KInterfering;
    throw validation_error("unknown sample model '" + name +
                           "' (expected exact, truncated or k-interfering)");
}

/**
 * A batch of output-configuration records together with everything
 * needed to reproduce or audit it.  Record r is drawn entirely from the
 * random stream derive_stream_seed(seed, r), so any prefix of a larger
 * batch with the same seed contains identical records.
 */
struct SampleSet {
    SampleModel model = SampleModel::Exact;
    int dim = 0;
    InputSpec input;
    double xi = 1.0;
    double eta = 1.0;
    double nu = 0.0;
    /// Cutoff order (truncated model) or interfering-subset size
    /// (k-interfering model); 0 when not applicable.
    int k = 0;
    std::uint64_t seed = 0;
    std::string instance_hash;
    std::vector<std::vector<int>> records;
};

/**
 * A probability vector over an explicit configuration list, with its
 * cumulative table for inverse-CDF draws.
 */
struct EnumeratedDistribution {
    ConfigurationList configs;
    std::vector<double> probabilities;
    std::vector<double> cdf;
    /// Total negative mass removed before renormalization (truncated
    /// approximations only; raw truncated values may dip below zero).
    double clamped_mass = 0.0;
    /// Sum of the raw values before renormalization.
    double raw_total = 0.0;

    long long draw(Rng& rng) const {
        const double u = rng.uniform01();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const long long index = it == cdf.end() ? static_cast<long long>(cdf.size()) - 1
                                                : static_cast<long long>(it - cdf.begin());
        return index;
    }
};

namespace detail {

/// Clamps negatives, renormalizes, and builds the cumulative table.
/// roundoff_floor is the largest negative value treated as numerical
/// noise; anything more negative counts as genuine clamped mass when
/// allow_negative_mass is set and is rejected otherwise.
inline EnumeratedDistribution finalize_distribution(ConfigurationList configs,
                                                    std::vector<double> raw,
                                                    bool allow_negative_mass,
                                                    double roundoff_floor = 1e-9) {
    EnumeratedDistribution dist;
    dist.configs = std::move(configs);
    KahanSum<double> raw_sum;
    KahanSum<double> clamped;
    for (double& value : raw) {
        raw_sum.add(value);
        if (value < 0.0) {
            if (!allow_negative_mass && value < -roundoff_floor) {
                throw validation_error("finalize_distribution: negative probability beyond "
                                       "the roundoff floor in an exact distribution");
            }
            clamped.add(-value);
            value = 0.0;
        }
    }
    dist.raw_total = raw_sum.get();
    dist.clamped_mass = clamped.get();
    dist.probabilities = std::move(raw);
    dist.cdf.resize(dist.probabilities.size());
    KahanSum<double> running;
    for (std::size_t i = 0; i < dist.probabilities.size(); ++i) {
        running.add(dist.probabilities[i]);
        dist.cdf[i] = running.get();
    }
    const double total = running.get();
    if (!(total > 0.0)) {
        throw degenerate_distribution_error(
            "finalize_distribution: no probability mass left to sample from");
    }
    for (double& c : dist.cdf) {
        c /= total;
    }
    dist.cdf.back() = 1.0;
    for (double& p : dist.probabilities) {
        p /= total;
    }
    return dist;
}

} // namespace detail

/// Exact lossless output distribution of the survivors in the given
/// input ports, ready for inverse-CDF sampling.
inline EnumeratedDistribution make_exact_distribution(const Interferometer& u,
                                                      const InputSpec& input, double xi) {
    ConfigurationList configs = enumerate_configurations(input.n_bosons, u.dim);
    std::vector<double> raw = enumerate_distribution(u, input, xi, configs);
    return detail::finalize_distribution(std::move(configs), std::move(raw), false);
}

/// Order-k truncated distribution with negatives clamped to zero and the
/// remainder renormalized; the removed mass is recorded on the result.
inline EnumeratedDistribution make_truncated_distribution(const Interferometer& u,
                                                          const InputSpec& input,
                                                          const CutoffPolicy& policy) {
    ConfigurationList configs = enumerate_configurations(input.n_bosons, u.dim);
    std::vector<double> raw = enumerate_distribution_truncated(u, input, policy, configs);
    const bool is_exact = policy.k_max >= input.n_bosons;
    return detail::finalize_distribution(std::move(configs), std::move(raw), !is_exact);
}

/**
 * Samples the full noise model: each photon survives independently with
 * probability eta^2, the survivors' output configuration is drawn from
 * their exact interference distribution, and every port receives Poisson
 * dark counts of rate nu.
 *
 * Per-record draw order (one stream per record): survival flags in boson
 * order (skipped entirely when eta = 1), one uniform for the
 * configuration (skipped when no photon survived), then dark counts in
 * port order (skipped when nu = 0).
 */
class ExactSampler {
public:
    ExactSampler(const Interferometer& u, const InputSpec& input, const NoiseParams& noise)
        : u_(u), input_(input), noise_(noise) {
        input_.validate_against(u_.dim);
        noise_.validate();
        if (input_.n_bosons > kExactConfigBosonCap) {
            throw size_limit_error("ExactSampler: photon number exceeds the exact cap");
        }
    }

    const EnumeratedDistribution& distribution_for(const std::vector<int>& ports) {
        auto found = cache_.find(ports);
        if (found != cache_.end()) {
            return found->second;
        }
        InputSpec sub;
        sub.n_bosons = static_cast<int>(ports.size());
        sub.input_ports = ports;
        auto inserted = cache_.emplace(ports, make_exact_distribution(u_, sub, noise_.xi));
        return inserted.first->second;
    }

    SampleSet run(long long count, std::uint64_t seed) {
        if (count < 1) {
            throw invalid_argument_error("ExactSampler::run requires count >= 1");
        }
        SampleSet set;
        set.model = SampleModel::Exact;
        set.dim = u_.dim;
        set.input = input_;
        set.xi = noise_.xi;
        set.eta = noise_.eta;
        set.nu = noise_.nu;
        set.k = 0;
        set.seed = seed;
        set.instance_hash = interferometer_hash(u_);
        set.records.reserve(static_cast<std::size_t>(count));
        const double transmit = noise_.eta * noise_.eta;
        std::vector<int> survivors;
        std::vector<int> occupations;
        for (long long rec = 0; rec < count; ++rec) {
            Rng rng(derive_stream_seed(seed, static_cast<std::uint64_t>(rec)));
            const std::vector<int>* ports = &input_.input_ports;
            if (noise_.eta < 1.0) {
                survivors.clear();
                for (const int port : input_.input_ports) {
                    if (rng.uniform01() < transmit) {
                        survivors.push_back(port);
                    }
                }
                ports = &survivors;
            }
            occupations.assign(static_cast<std::size_t>(u_.dim), 0);
            if (!ports->empty()) {
                const EnumeratedDistribution& dist = distribution_for(*ports);
                dist.configs.copy_into(dist.draw(rng), occupations);
            }
            if (noise_.nu > 0.0) {
                for (int l = 0; l < u_.dim; ++l) {
                    occupations[static_cast<std::size_t>(l)] +=
                        static_cast<int>(rng.poisson(noise_.nu));
                }
            }
            set.records.push_back(occupations);
        }
        return set;
    }

private:
    Interferometer u_;
    InputSpec input_;
    NoiseParams noise_;
    std::map<std::vector<int>, EnumeratedDistribution> cache_;
};

/// Samples the lossless order-k classical approximation.  One uniform
/// per record.  For k_max >= n the distribution coincides with the exact
/// one, so records match ExactSampler output (eta = 1, nu = 0) draw for
/// draw at equal seeds.
class TruncatedSampler {
public:
    TruncatedSampler(const Interferometer& u, const InputSpec& input, const CutoffPolicy& policy)
        : u_(u), input_(input), policy_(policy),
          dist_(make_truncated_distribution(u, input, policy)) {}

    double clamped_mass() const { return dist_.clamped_mass; }
    const EnumeratedDistribution& distribution() const { return dist_; }

    SampleSet run(long long count, std::uint64_t seed) const {
        if (count < 1) {
            throw invalid_argument_error("TruncatedSampler::run requires count >= 1");
        }
        SampleSet set;
        set.model = SampleModel::TruncatedCycles;
        set.dim = u_.dim;
        set.input = input_;
        set.xi = policy_.xi;
        set.k = policy_.k_max;
        set.seed = seed;
        set.instance_hash = interferometer_hash(u_);
        set.records.reserve(static_cast<std::size_t>(count));
        std::vector<int> occupations;
        for (long long rec = 0; rec < count; ++rec) {
            Rng rng(derive_stream_seed(seed, static_cast<std::uint64_t>(rec)));
            dist_.configs.copy_into(dist_.draw(rng), occupations);
            set.records.push_back(occupations);
        }
        return set;
    }

private:
    Interferometer u_;
    InputSpec input_;
    CutoffPolicy policy_;
    EnumeratedDistribution dist_;
};

/**
 * Samples the subset-interference classical approximation: per record a
 * uniformly random group of k photons interferes exactly (with overlap
 * xi among themselves) while the remaining photons are routed one by one
 * from their single-photon output distributions.
 *
 * Per-record draw order: k bounded integers for the subset choice
 * (partial Fisher-Yates over boson indices), one uniform for the
 * interfering group's configuration, then one uniform per lone photon in
 * ascending boson order.
 */
class KInterferingSampler {
public:
    KInterferingSampler(const Interferometer& u, const InputSpec& input, int k, double xi)
        : u_(u), input_(input), k_(k), xi_(xi) {
        input_.validate_against(u_.dim);
        if (k < 1 || k > input.n_bosons) {
            throw invalid_argument_error("KInterferingSampler requires 1 <= k <= n_bosons");
        }
        if (!(xi >= 0.0 && xi <= 1.0)) {
            throw invalid_argument_error("KInterferingSampler requires xi in [0, 1]");
        }
        const int dim = u_.dim;
        single_cdf_.resize(input_.input_ports.size());
        for (std::size_t j = 0; j < input_.input_ports.size(); ++j) {
            const int row = input_.input_ports[j] - 1;
            std::vector<double>& cdf = single_cdf_[j];
            cdf.resize(static_cast<std::size_t>(dim));
            KahanSum<double> running;
            for (int l = 0; l < dim; ++l) {
                running.add(std::norm(u_.matrix(row, l)));
                cdf[static_cast<std::size_t>(l)] = running.get();
            }
            const double total = running.get();
            for (double& c : cdf) {
                c /= total;
            }
            cdf.back() = 1.0;
        }
    }

    const EnumeratedDistribution& distribution_for(const std::vector<int>& ports) {
        auto found = cache_.find(ports);
        if (found != cache_.end()) {
            return found->second;
        }
        InputSpec sub;
        sub.n_bosons = static_cast<int>(ports.size());
        sub.input_ports = ports;
        auto inserted = cache_.emplace(ports, make_exact_distribution(u_, sub, xi_));
        return inserted.first->second;
    }

    SampleSet run(long long count, std::uint64_t seed) {
        if (count < 1) {
            throw invalid_argument_error("KInterferingSampler::run requires count >= 1");
        }
        const int n = input_.n_bosons;
        SampleSet set;
        set.model = SampleModel::KInterfering;
        set.dim = u_.dim;
        set.input = input_;
        set.xi = xi_;
        set.k = k_;
        set.seed = seed;
        set.instance_hash = interferometer_hash(u_);
        set.records.reserve(static_cast<std::size_t>(count));
        std::vector<int> order(static_cast<std::size_t>(n));
        std::vector<bool> chosen(static_cast<std::size_t>(n));
        std::vector<int> group;
        std::vector<int> occupations;
        for (long long rec = 0; rec < count; ++rec) {
            Rng rng(derive_stream_seed(seed, static_cast<std::uint64_t>(rec)));
            for (int i = 0; i < n; ++i) {
                order[static_cast<std::size_t>(i)] = i;
            }
            for (int i = 0; i < k_; ++i) {
                const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
                std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
            }
            std::fill(chosen.begin(), chosen.end(), false);
            group.clear();
            for (int i = 0; i < k_; ++i) {
                chosen[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;
            }
            for (int j = 0; j < n; ++j) {
                if (chosen[static_cast<std::size_t>(j)]) {
                    group.push_back(input_.input_ports[static_cast<std::size_t>(j)]);
                }
            }
            const EnumeratedDistribution& dist = distribution_for(group);
            occupations.assign(static_cast<std::size_t>(u_.dim), 0);
            std::vector<int> interfering;
            dist.configs.copy_into(dist.draw(rng), interfering);
            for (int l = 0; l < u_.dim; ++l) {
                occupations[static_cast<std::size_t>(l)] = interfering[static_cast<std::size_t>(l)];
            }
            for (int j = 0; j < n; ++j) {
                if (chosen[static_cast<std::size_t>(j)]) {
                    continue;
                }
                const std::vector<double>& cdf = single_cdf_[static_cast<std::size_t>(j)];
                const double u01 = rng.uniform01();
                const auto it = std::upper_bound(cdf.begin(), cdf.end(), u01);
                const std::size_t port = it == cdf.end() ? cdf.size() - 1
                                                         : static_cast<std::size_t>(it - cdf.begin());
                ++occupations[port];
            }
            set.records.push_back(occupations);
        }
        return set;
    }

private:
    Interferometer u_;
    InputSpec input_;
    int k_ = 1;
    double xi_ = 1.0;
    std::vector<std::vector<double>> single_cdf_;
    std::map<std::vector<int>, EnumeratedDistribution> cache_;
};

inline SampleSet sample_exact(const Interferometer& u, const InputSpec& input,
                              const NoiseParams& noise, long long count, std::uint64_t seed) {
    ExactSampler sampler(u, input, noise);
    return sampler.run(count, seed);
}

inline SampleSet sample_truncated(const Interferometer& u, const InputSpec& input,
                                  const CutoffPolicy& policy, long long count,
                                  std::uint64_t seed) {
    TruncatedSampler sampler(u, input, policy);
    return sampler.run(count, seed);
}

inline SampleSet sample_k_interfering(const Interferometer& u, const InputSpec& input, int k,
                                      double xi, long long count, std::uint64_t seed) {
    KInterferingSampler sampler(u, input, k, xi);
    return sampler.run(count, seed);
}

/// Estimated probability that every detection in a record lies inside a
/// port subset.
struct SubsetEstimate {
    double p_hat = 0.0;
    double std_error = 0.0;
    long long hits = 0;
    long long count = 0;
};

inline SubsetEstimate estimate_subset_probability(const SampleSet& set, const PortSubset& omega) {
    omega.validate_against(set.dim);
    if (set.records.empty()) {
        throw invalid_argument_error("estimate_subset_probability: empty sample set");
    }
    std::vector<bool> outside(static_cast<std::size_t>(set.dim), true);
    for (const int port : omega.ports) {
        outside[static_cast<std::size_t>(port - 1)] = false;
    }
    long long hits = 0;
    for (const std::vector<int>& record : set.records) {
        bool inside = true;
        for (int l = 0; l < set.dim; ++l) {
            if (outside[static_cast<std::size_t>(l)] && record[static_cast<std::size_t>(l)] > 0) {
                inside = false;
                break;
            }
        }
        if (inside) {
            ++hits;
        }
    }
    SubsetEstimate estimate;
    estimate.hits = hits;
    estimate.count = static_cast<long long>(set.records.size());
    estimate.p_hat = static_cast<double>(hits) / static_cast<double>(estimate.count);
    estimate.std_error = std::sqrt(estimate.p_hat * (1.0 - estimate.p_hat) /
                                   static_cast<double>(estimate.count));
    return estimate;
}

enum class Verdict { Separated, Inconclusive };

inline std::string to_string(Verdict verdict) {
    return verdict == Verdict::Separated ? "separated" : "inconclusive";
}

struct DistinguisherResult {
    SubsetEstimate a;
    SubsetEstimate b;
    double z_score = 0.0;
    double threshold_sigmas = 0.0;
    Verdict verdict = Verdict::Inconclusive;
};

/**
 * Two-proportion z-test on the subset probability estimated from two
 * sample sets.  The null hypothesis is that both sets draw the subset
 * event with the same probability; the pooled standard error
 * sqrt(p (1-p) (1/Ta + 1/Tb)) normalizes the difference.  Separated
 * means |z| reached the threshold.
 */
inline DistinguisherResult distinguish(const SampleSet& a, const SampleSet& b,
                                       const PortSubset& omega, double threshold_sigmas = 5.0) {
    if (a.dim != b.dim) {
        throw validation_error("distinguish: sample sets have different port counts");
    }
    if (!a.instance_hash.empty() && !b.instance_hash.empty() &&
        a.instance_hash != b.instance_hash) {
        throw validation_error("distinguish: sample sets come from different interferometers");
    }
    if (!(threshold_sigmas > 0.0)) {
        throw invalid_argument_error("distinguish requires threshold_sigmas > 0");
    }
    DistinguisherResult result;
    result.a = estimate_subset_probability(a, omega);
    result.b = estimate_subset_probability(b, omega);
    result.threshold_sigmas = threshold_sigmas;
    const double total = static_cast<double>(result.a.count + result.b.count);
    const double pooled = static_cast<double>(result.a.hits + result.b.hits) / total;
    const double pooled_se =
        std::sqrt(pooled * (1.0 - pooled) *
                  (1.0 / static_cast<double>(result.a.count) +
                   1.0 / static_cast<double>(result.b.count)));
    result.z_score = pooled_se > 0.0 ? (result.a.p_hat - result.b.p_hat) / pooled_se : 0.0;
    result.verdict =
        std::abs(result.z_score) >= threshold_sigmas ? Verdict::Separated : Verdict::Inconclusive;
    return result;
}

/**
 * Dataset file format: one JSON object per line.  The first line is a
 * header carrying the model, the experiment parameters and the
 * interferometer fingerprint; each following line is {"m": [...]} with
 * one occupation per port.
 */
inline void write_sample_set(const SampleSet& set, const std::filesystem::path& path) {
    nlohmann::json header{
        {"format", "bosoncut-samples"},
        {"version", 1},
        {"model", to_string(set.model)},
        {"dim", set.dim},
        {"n_bosons", set.input.n_bosons},
        {"input_ports", set.input.input_ports},
        {"xi", set.xi},
        {"eta", set.eta},
        {"nu", set.nu},
        {"k", set.k},
        {"seed", set.seed},
        {"count", set.records.size()},
        {"instance_hash", set.instance_hash},
    };
    std::ostringstream out;
    out << header.dump() << '\n';
    for (const std::vector<int>& record : set.records) {
        out << nlohmann::json{{"m", record}}.dump() << '\n';
    }
    atomic_write_text(path, out.str());
}

inline SampleSet read_sample_set(const std::filesystem::path& path) {
    const std::string content = read_text_file(path);
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line)) {
        throw validation_error("sample set '" + path.string() + "' is empty");
    }
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
        throw validation_error("sample set '" + path.string() + "': header is not valid JSON");
    }
    SampleSet set;
    try {
        if (header.at("format").get<std::string>() != "bosoncut-samples") {
            throw validation_error("sample set '" + path.string() + "': unknown format field");
        }
        if (header.at("version").get<int>() != 1) {
            throw validation_error("sample set '" + path.string() + "': unsupported version");
        }
        set.model = sample_model_from_string(header.at("model").get<std::string>());
        set.dim = header.at("dim").get<int>();
        set.input.n_bosons = header.at("n_bosons").get<int>();
        set.input.input_ports = header.at("input_ports").get<std::vector<int>>();
        set.xi = header.at("xi").get<double>();
        set.eta = header.at("eta").get<double>();
        set.nu = header.at("nu").get<double>();
        set.k = header.at("k").get<int>();
        set.seed = header.at("seed").get<std::uint64_t>();
        set.instance_hash = header.at("instance_hash").get<std::string>();
    } catch (const nlohmann::json::exception& error) {
        throw validation_error("sample set '" + path.string() + "': bad header field: " +
                               error.what());
    }
    if (set.dim < 1) {
        throw validation_error("sample set '" + path.string() + "': dim must be >= 1");
    }
    const long long expected = header.at("count").get<long long>();
    long long line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) {
            continue;
        }
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception&) {
            throw validation_error("sample set '" + path.string() + "' line " +
                                   std::to_string(line_number) + ": invalid JSON");
        }
        std::vector<int> record;
        try {
            record = doc.at("m").get<std::vector<int>>();
        } catch (const nlohmann::json::exception&) {
            throw validation_error("sample set '" + path.string() + "' line " +
                                   std::to_string(line_number) + ": missing record field 'm'");
        }
        if (static_cast<int>(record.size()) != set.dim) {
            throw validation_error("sample set '" + path.string() + "' line " +
                                   std::to_string(line_number) + ": record has wrong port count");
        }
        for (const int count : record) {
            if (count < 0) {
                throw validation_error("sample set '" + path.string() + "' line " +
                                       std::to_string(line_number) + ": negative occupation");
            }
        }
        set.records.push_back(std::move(record));
    }
    if (static_cast<long long>(set.records.size()) != expected) {
        throw validation_error("sample set '" + path.string() +
                               "': record count does not match the header");
    }
    return set;
}

} // namespace bosoncut

#endif
