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

#include <charconv>
#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bosoncut/bosoncut.hpp"

namespace {

using nlohmann::json;

int parse_int(const std::string& token) {
    int value = 0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw bosoncut::validation_error("'" + token + "' is not an integer");
    }
    return value;
}

std::vector<std::string> split_on(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

/// Accepts comma lists with ranges, e.g. "1,3..5,9".
std::vector<int> parse_port_list(const std::string& text) {
    std::vector<int> ports;
    for (const std::string& token : split_on(text, ',')) {
        const std::size_t dots = token.find("..");
        if (dots == std::string::npos) {
            ports.push_back(parse_int(token));
            continue;
        }
        const int lo = parse_int(token.substr(0, dots));
        const int hi = parse_int(token.substr(dots + 2));
        if (hi < lo) {
            throw bosoncut::validation_error("range '" + token + "' runs backwards");
        }
        for (int p = lo; p <= hi; ++p) {
            ports.push_back(p);
        }
    }
    return ports;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    for (const std::string& token : split_on(text, ',')) {
        values.push_back(parse_int(token));
    }
    return values;
}

std::pair<int, int> parse_range(const std::string& text) {
    const std::size_t dots = text.find("..");
    if (dots == std::string::npos) {
        const int n = parse_int(text);
        return {n, n};
    }
    return {parse_int(text.substr(0, dots)), parse_int(text.substr(dots + 2))};
}

bosoncut::Interferometer load_unitary(const std::string& path) {
    const std::string content = bosoncut::read_text_file(path);
    json doc;
    try {
        doc = json::parse(content);
    } catch (const json::exception& error) {
        throw bosoncut::validation_error("'" + path + "' is not valid JSON: " + error.what());
    }
    return bosoncut::interferometer_from_json(doc);
}

bosoncut::InputSpec make_input(const std::string& ports_text, int dim) {
    bosoncut::InputSpec input;
    input.input_ports = parse_port_list(ports_text);
    input.n_bosons = static_cast<int>(input.input_ports.size());
    input.validate_against(dim);
    return input;
}

bosoncut::PortSubset make_subset(const std::string& omega_text, int dim) {
    std::vector<int> ports = parse_port_list(omega_text);
    std::sort(ports.begin(), ports.end());
    bosoncut::PortSubset subset{std::move(ports)};
    subset.validate_against(dim);
    return subset;
}

const char* kind_name(bosoncut::ProbabilityValue::Kind kind) {
    switch (kind) {
    case bosoncut::ProbabilityValue::Kind::Exact: return "exact";
    case bosoncut::ProbabilityValue::Kind::Truncated: return "truncated";
    case bosoncut::ProbabilityValue::Kind::MonteCarlo: return "monte-carlo";
    }
    return "unknown";
}

void print_json(const json& doc) { std::cout << doc.dump(2) << '\n'; }

struct GenOptions {
    std::string kind;
    int dim = 0;
    std::optional<std::uint64_t> seed;
    std::string out;
};

void run_gen(const GenOptions& opts) {
    bosoncut::Interferometer u;
    if (opts.kind == "fourier") {
        if (opts.seed) {
            throw bosoncut::validation_error("--seed applies to haar and balanced kinds only");
        }
        u = bosoncut::fourier(opts.dim);
    } else {
        if (!opts.seed) {
            throw bosoncut::validation_error("--seed is required for kind '" + opts.kind + "'");
        }
        if (opts.kind == "haar") {
            u = bosoncut::haar_random(opts.dim, *opts.seed);
        } else {
            if (opts.dim < 2) {
                throw bosoncut::validation_error("balanced kind requires --dim >= 2");
            }
            u = bosoncut::balanced_port(bosoncut::haar_random(opts.dim - 1, *opts.seed));
        }
    }
    bosoncut::atomic_write_text(opts.out, bosoncut::to_json(u).dump(2) + "\n");
    json out{{"out", opts.out},
             {"dim", u.dim},
             {"kind", bosoncut::to_string(u.kind)},
             {"unitarity_residual", bosoncut::unitarity_residual(u.matrix)},
             {"instance_hash", bosoncut::interferometer_hash(u)}};
    if (u.seed) {
        out["seed"] = *u.seed;
    }
    print_json(out);
}

void setup_gen(CLI::App& app) {
    auto opts = std::make_shared<GenOptions>();
    CLI::App* cmd = app.add_subcommand("gen-unitary", "Generate an interferometer matrix file");
    cmd->add_option("--kind", opts->kind, "haar, fourier or balanced")
        ->required()
        ->check(CLI::IsMember({"haar", "fourier", "balanced"}));
    cmd->add_option("--dim", opts->dim, "Number of ports of the finished interferometer")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opts->seed, "Seed for the random draw");
    cmd->add_option("--out", opts->out, "Output JSON file")->required();
    cmd->callback([opts] { run_gen(*opts); });
}

struct ProbOptions {
    std::string unitary;
    std::string ports;
    std::string occupations;
    double xi = 1.0;
    std::optional<int> k;
};

void run_prob(const ProbOptions& opts) {
    const bosoncut::Interferometer u = load_unitary(opts.unitary);
    const bosoncut::InputSpec input = make_input(opts.ports, u.dim);
    const std::vector<int> m = parse_int_list(opts.occupations);
    bosoncut::validate_configuration(m, u.dim, input.n_bosons);
    bosoncut::ProbabilityValue value;
    if (opts.k) {
        value = bosoncut::output_probability_truncated(u, input, m,
                                                      bosoncut::CutoffPolicy{*opts.k, opts.xi});
    } else {
        value = bosoncut::output_probability(u, input, m, opts.xi);
    }
    json out{{"probability", value.value},
             {"kind", kind_name(value.kind)},
             {"dim", u.dim},
             {"n_bosons", input.n_bosons},
             {"xi", opts.xi}};
    if (opts.k) {
        out["cutoff"] = value.cutoff;
    }
    print_json(out);
}

void setup_prob(CLI::App& app) {
    auto opts = std::make_shared<ProbOptions>();
    CLI::App* cmd =
        app.add_subcommand("prob", "Probability of one output configuration");
    cmd->add_option("--unitary", opts->unitary, "Interferometer JSON file")->required();
    cmd->add_option("--ports", opts->ports, "Occupied input ports, e.g. 1,2,3 or 1..4")
        ->required();
    cmd->add_option("--occupations", opts->occupations,
                    "Output configuration as per-port counts, e.g. 2,0,1")
        ->required();
    cmd->add_option("--xi", opts->xi, "Pairwise overlap of distinct photons")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--k", opts->k, "Evaluate the order-k approximation instead");
    cmd->callback([opts] { run_prob(*opts); });
}

struct NoclickOptions {
    std::string unitary;
    std::string ports;
    std::string omega;
    double xi = 1.0;
    std::optional<int> k;
    std::optional<long long> estimate;
    std::uint64_t seed = 0;
};

void run_noclick(const NoclickOptions& opts) {
    const bosoncut::Interferometer u = load_unitary(opts.unitary);
    const bosoncut::InputSpec input = make_input(opts.ports, u.dim);
    const bosoncut::PortSubset omega = make_subset(opts.omega, u.dim);
    bosoncut::ProbabilityValue value;
    if (opts.k) {
        value = bosoncut::truncated_subset_probability(u, input, omega,
                                                      bosoncut::CutoffPolicy{*opts.k, opts.xi});
    } else if (opts.estimate) {
        value = bosoncut::subset_probability_estimate(u, input, omega, opts.xi, *opts.estimate,
                                                     opts.seed);
    } else {
        value = bosoncut::subset_probability(u, input, omega, opts.xi);
    }
    json out{{"value", value.value},
             {"kind", kind_name(value.kind)},
             {"omega", omega.ports},
             {"xi", opts.xi}};
    if (opts.k) {
        out["cutoff"] = value.cutoff;
    }
    if (opts.estimate) {
        out["std_error"] = value.std_error;
        out["trials"] = *opts.estimate;
    }
    print_json(out);
}

void setup_noclick(CLI::App& app) {
    auto opts = std::make_shared<NoclickOptions>();
    CLI::App* cmd = app.add_subcommand(
        "noclick", "Probability that no photon leaves a chosen port subset");
    cmd->add_option("--unitary", opts->unitary, "Interferometer JSON file")->required();
    cmd->add_option("--ports", opts->ports, "Occupied input ports")->required();
    cmd->add_option("--omega", opts->omega, "Allowed output ports, e.g. 2..8")->required();
    cmd->add_option("--xi", opts->xi, "Pairwise overlap of distinct photons")
        ->check(CLI::Range(0.0, 1.0));
    CLI::Option* k_opt =
        cmd->add_option("--k", opts->k, "Evaluate the order-k approximation instead");
    CLI::Option* est_opt = cmd->add_option("--estimate", opts->estimate,
                                           "Monte Carlo trials instead of the exact value");
    cmd->add_option("--seed", opts->seed, "Seed for --estimate");
    k_opt->excludes(est_opt);
    cmd->callback([opts] { run_noclick(*opts); });
}

struct TvdOptions {
    std::string unitary;
    std::string ports;
    double xi = 1.0;
    int k = 1;
};

void run_tvd(const TvdOptions& opts) {
    const bosoncut::Interferometer u = load_unitary(opts.unitary);
    const bosoncut::InputSpec input = make_input(opts.ports, u.dim);
    const bosoncut::CutoffPolicy policy{opts.k, opts.xi};
    const bosoncut::TvReport report = bosoncut::tv_distance_exact(u, input, opts.xi, policy);
    const double gap = bosoncut::delta_p1(u, input, opts.xi, policy);
    print_json(json{{"tv_distance", report.tv},
                    {"sign_split_gap", report.sign_split_gap},
                    {"config_count", report.config_count},
                    {"cutoff", report.cutoff},
                    {"delta_p1", gap},
                    {"xi", opts.xi}});
}

void setup_tvd(CLI::App& app) {
    auto opts = std::make_shared<TvdOptions>();
    CLI::App* cmd = app.add_subcommand(
        "tvd", "Total variation distance between the exact and order-k distributions");
    cmd->add_option("--unitary", opts->unitary, "Interferometer JSON file")->required();
    cmd->add_option("--ports", opts->ports, "Occupied input ports")->required();
    cmd->add_option("--xi", opts->xi, "Pairwise overlap of distinct photons")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--k", opts->k, "Cutoff order")->required()->check(CLI::PositiveNumber);
    cmd->callback([opts] { run_tvd(*opts); });
}

struct BoundOptions {
    double xi = 1.0;
    double eta = 1.0;
    double nu = 0.0;
    double rho = 0.0;
    int k = 1;
    int n = 0;
    double sigmas = 5.0;
};

void run_bound(const BoundOptions& opts) {
    const bosoncut::BoundReport report = bosoncut::make_bound_report(
        bosoncut::NoiseParams{opts.xi, opts.eta, opts.nu}, opts.rho, opts.k, opts.n, opts.sigmas);
    print_json(json{{"w1_lower_bound", report.w1},
                    {"relative_variance", report.rel_variance},
                    {"regime", bosoncut::to_string(report.regime)},
                    {"sample_budget", report.budget},
                    {"rho", report.rho},
                    {"k", report.k},
                    {"n", report.n},
                    {"target_sigmas", report.target_sigmas}});
}

void setup_bound(CLI::App& app) {
    auto opts = std::make_shared<BoundOptions>();
    CLI::App* cmd = app.add_subcommand(
        "bound", "Analytic distinguishability bound and sample budget");
    cmd->add_option("--xi", opts->xi, "Pairwise overlap")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--eta", opts->eta, "Amplitude transmission")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--nu", opts->nu, "Dark count rate per port")->check(CLI::NonNegativeNumber);
    cmd->add_option("--rho", opts->rho, "Photon density n/m")->required();
    cmd->add_option("--k", opts->k, "Cutoff order")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--n", opts->n, "Photon number")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--sigmas", opts->sigmas, "Separation target in standard errors");
    cmd->callback([opts] { run_bound(*opts); });
}

struct CensusOptions {
    std::string n_range;
    int k = 1;
    std::string xi = "1";
    std::string out;
};

void run_census(const CensusOptions& opts) {
    const auto [lo, hi] = parse_range(opts.n_range);
    bosoncut::census_tables(lo, hi, opts.k, bosoncut::parse_rational(opts.xi), opts.out);
    print_json(json{{"out", opts.out}, {"n_lo", lo}, {"n_hi", hi}, {"k", opts.k},
                    {"xi", opts.xi}});
}

void setup_census(CLI::App& app) {
    auto opts = std::make_shared<CensusOptions>();
    CLI::App* cmd = app.add_subcommand(
        "census", "Tabulate surviving permutation fractions against their bounds");
    cmd->add_option("--n-range", opts->n_range, "Photon numbers to scan, e.g. 2..40")
        ->required();
    cmd->add_option("--k", opts->k, "Cutoff order")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--xi", opts->xi, "Overlap as an exact rational, e.g. 9/10 or 0.9");
    cmd->add_option("--out", opts->out, "Output CSV file")->required();
    cmd->callback([opts] { run_census(*opts); });
}

struct SampleOptions {
    std::string unitary;
    std::string ports;
    std::string model;
    long long count = 0;
    std::uint64_t seed = 0;
    std::string out;
    double xi = 1.0;
    double eta = 1.0;
    double nu = 0.0;
    std::optional<int> k;
};

void run_sample(const SampleOptions& opts) {
    const bosoncut::Interferometer u = load_unitary(opts.unitary);
    const bosoncut::InputSpec input = make_input(opts.ports, u.dim);
    const bosoncut::SampleModel model = bosoncut::sample_model_from_string(opts.model);
    bosoncut::SampleSet set;
    if (model == bosoncut::SampleModel::Exact) {
        if (opts.k) {
            throw bosoncut::validation_error(
                "--k applies to the truncated and k-interfering models");
        }
        set = bosoncut::sample_exact(u, input, bosoncut::NoiseParams{opts.xi, opts.eta, opts.nu},
                                     opts.count, opts.seed);
    } else {
        if (!opts.k) {
            throw bosoncut::validation_error("model '" + opts.model + "' requires --k");
        }
        if (opts.eta != 1.0 || opts.nu != 0.0) {
            throw bosoncut::validation_error(
                "the approximate models are lossless; --eta and --nu apply to exact only");
        }
        if (model == bosoncut::SampleModel::TruncatedCycles) {
            set = bosoncut::sample_truncated(u, input, bosoncut::CutoffPolicy{*opts.k, opts.xi},
                                             opts.count, opts.seed);
        } else {
            set = bosoncut::sample_k_interfering(u, input, *opts.k, opts.xi, opts.count,
                                                 opts.seed);
        }
    }
    bosoncut::write_sample_set(set, opts.out);
    print_json(json{{"out", opts.out},
                    {"model", bosoncut::to_string(set.model)},
                    {"count", set.records.size()},
                    {"instance_hash", set.instance_hash},
                    {"seed", set.seed}});
}

void setup_sample(CLI::App& app) {
    auto opts = std::make_shared<SampleOptions>();
    CLI::App* cmd = app.add_subcommand("sample", "Draw output records into a JSONL dataset");
    cmd->add_option("--unitary", opts->unitary, "Interferometer JSON file")->required();
    cmd->add_option("--ports", opts->ports, "Occupied input ports")->required();
    cmd->add_option("--model", opts->model, "exact, trunc or kinterf")
        ->required()
        ->check(CLI::IsMember({"exact", "trunc", "truncated", "kinterf", "k-interfering"}));
    cmd->add_option("--count", opts->count, "Number of records")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opts->seed, "Base seed; record r uses stream r")->required();
    cmd->add_option("--out", opts->out, "Output JSONL file")->required();
    cmd->add_option("--xi", opts->xi, "Pairwise overlap")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--eta", opts->eta, "Amplitude transmission (exact model)")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--nu", opts->nu, "Dark count rate per port (exact model)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--k", opts->k, "Cutoff order or interfering group size");
    cmd->callback([opts] { run_sample(*opts); });
}

struct DistinguishOptions {
    std::string a;
    std::string b;
    std::string omega;
    double sigmas = 5.0;
};

void run_distinguish(const DistinguishOptions& opts) {
    const bosoncut::SampleSet a = bosoncut::read_sample_set(opts.a);
    const bosoncut::SampleSet b = bosoncut::read_sample_set(opts.b);
    const bosoncut::PortSubset omega = make_subset(opts.omega, a.dim);
    const bosoncut::DistinguisherResult result =
        bosoncut::distinguish(a, b, omega, opts.sigmas);
    const auto estimate_json = [](const bosoncut::SubsetEstimate& e) {
        return json{{"hits", e.hits},
                    {"count", e.count},
                    {"p_hat", e.p_hat},
                    {"std_error", e.std_error}};
    };
    print_json(json{{"a", estimate_json(result.a)},
                    {"b", estimate_json(result.b)},
                    {"z_score", result.z_score},
                    {"threshold_sigmas", result.threshold_sigmas},
                    {"verdict", bosoncut::to_string(result.verdict)},
                    {"omega", omega.ports}});
}

void setup_distinguish(CLI::App& app) {
    auto opts = std::make_shared<DistinguishOptions>();
    CLI::App* cmd = app.add_subcommand(
        "distinguish", "Two-sample z-test on the no-click probability of a subset");
    cmd->add_option("--a", opts->a, "First sample set (JSONL)")->required();
    cmd->add_option("--b", opts->b, "Second sample set (JSONL)")->required();
    cmd->add_option("--omega", opts->omega, "Allowed output ports")->required();
    cmd->add_option("--sigmas", opts->sigmas, "Separation threshold in standard errors");
    cmd->callback([opts] { run_distinguish(*opts); });
}

struct RunOptions {
    std::string config;
};

void run_run(const RunOptions& opts) {
    const bosoncut::ExperimentConfig config = bosoncut::experiment_config_from_file(opts.config);
    const bosoncut::ExperimentResult result = bosoncut::run_experiment(config);
    print_json(result.summary);
}

void setup_run(CLI::App& app) {
    auto opts = std::make_shared<RunOptions>();
    CLI::App* cmd = app.add_subcommand(
        "run", "Run a full distinguishing experiment from a JSON config");
    cmd->add_option("--config", opts->config, "Experiment config JSON file")->required();
    cmd->callback([opts] { run_run(*opts); });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noisy boson sampling: exact probabilities, cutoff approximations and "
                 "distinguishing tests"};
    app.require_subcommand(1);
    app.set_version_flag("--version", bosoncut::kVersion);
    setup_gen(app);
    setup_prob(app);
    setup_noclick(app);
    setup_tvd(app);
    setup_bound(app);
    setup_census(app);
    setup_sample(app);
    setup_distinguish(app);
    setup_run(app);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const bosoncut::size_limit_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const bosoncut::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const bosoncut::invalid_argument_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const bosoncut::degenerate_distribution_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const bosoncut::validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
