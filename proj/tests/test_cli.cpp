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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include "bosoncut/bosoncut.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path work_dir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "bosoncut_cli_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out_path = work_dir() / ("stdout_" + std::to_string(counter));
    const fs::path err_path = work_dir() / ("stderr_" + std::to_string(counter));
    ++counter;
    const std::string command = std::string(BOSONCUT_CLI_PATH) + " " + args + " > " +
                                out_path.string() + " 2> " + err_path.string();
    const int status = std::system(command.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    fs::remove(out_path);
    fs::remove(err_path);
    return result;
}

json parse_stdout(const CliResult& result) {
    INFO("stdout: " << result.out);
    INFO("stderr: " << result.err);
    REQUIRE(result.exit_code == 0);
    return json::parse(result.out);
}

/// Generates an interferometer file once and hands back its path.
fs::path unitary_file(const std::string& name, const std::string& flags) {
    const fs::path path = work_dir() / name;
    if (!fs::exists(path)) {
        const CliResult result = run_cli("gen-unitary " + flags + " --out " + path.string());
        REQUIRE(result.exit_code == 0);
    }
    return path;
}

} // namespace

TEST_CASE("version and argument errors") {
    const CliResult version = run_cli("--version");
    REQUIRE(version.exit_code == 0);
    REQUIRE(version.out.find("0.1.0") != std::string::npos);

    REQUIRE(run_cli("").exit_code == 2);
    REQUIRE(run_cli("no-such-command").exit_code == 2);
}

TEST_CASE("gen-unitary writes reproducible instances") {
    const fs::path a = work_dir() / "haar_a.json";
    const fs::path b = work_dir() / "haar_b.json";
    const json out_a = parse_stdout(
        run_cli("gen-unitary --kind haar --dim 4 --seed 7 --out " + a.string()));
    const json out_b = parse_stdout(
        run_cli("gen-unitary --kind haar --dim 4 --seed 7 --out " + b.string()));
    REQUIRE(out_a.at("dim") == 4);
    REQUIRE(out_a.at("kind") == "haar");
    REQUIRE(out_a.at("seed") == 7);
    REQUIRE(out_a.at("unitarity_residual").get<double>() < 1e-10);
    REQUIRE(out_a.at("instance_hash").get<std::string>().size() == 16);
    REQUIRE(out_a.at("instance_hash") == out_b.at("instance_hash"));

    const bosoncut::Interferometer loaded =
        bosoncut::interferometer_from_json(json::parse(slurp(a)));
    REQUIRE(loaded.dim == 4);
    REQUIRE(bosoncut::interferometer_hash(loaded) == out_a.at("instance_hash"));

    REQUIRE(run_cli("gen-unitary --kind haar --dim 4 --out " + a.string()).exit_code == 2);
    REQUIRE(run_cli("gen-unitary --kind fourier --dim 4 --seed 1 --out " + a.string())
                .exit_code == 2);
    REQUIRE(run_cli("gen-unitary --kind nonsense --dim 4 --out " + a.string()).exit_code == 2);
}

TEST_CASE("prob agrees with the library") {
    const fs::path path = unitary_file("fourier4.json", "--kind fourier --dim 4");
    const bosoncut::Interferometer u =
        bosoncut::interferometer_from_json(json::parse(slurp(path)));
    const bosoncut::InputSpec input = bosoncut::InputSpec::first_ports(2);

    const json exact = parse_stdout(
        run_cli("prob --unitary " + path.string() +
                " --ports 1,2 --occupations 0,1,1,0 --xi 0.8"));
    const double expected = bosoncut::output_probability(u, input, {0, 1, 1, 0}, 0.8).value;
    REQUIRE(exact.at("probability").get<double>() == Catch::Approx(expected).epsilon(1e-12));
    REQUIRE(exact.at("kind") == "exact");

    const json truncated = parse_stdout(
        run_cli("prob --unitary " + path.string() +
                " --ports 1,2 --occupations 0,1,1,0 --xi 0.8 --k 1"));
    const double expected_k = bosoncut::output_probability_truncated(
                                  u, input, {0, 1, 1, 0}, bosoncut::CutoffPolicy{1, 0.8})
                                  .value;
    REQUIRE(truncated.at("probability").get<double>() ==
            Catch::Approx(expected_k).epsilon(1e-12));
    REQUIRE(truncated.at("kind") == "truncated");
    REQUIRE(truncated.at("cutoff") == 1);

    REQUIRE(run_cli("prob --unitary " + path.string() +
                    " --ports 1,2 --occupations 0,1,1 --xi 0.8")
                .exit_code == 2);
    REQUIRE(run_cli("prob --unitary " + (work_dir() / "absent.json").string() +
                    " --ports 1,2 --occupations 0,1,1,0")
                .exit_code == 4);
}

TEST_CASE("noclick evaluates subsets in all three modes") {
    const fs::path path = unitary_file("haar5.json", "--kind haar --dim 5 --seed 11");
    const bosoncut::Interferometer u =
        bosoncut::interferometer_from_json(json::parse(slurp(path)));
    const bosoncut::InputSpec input = bosoncut::InputSpec::first_ports(3);
    const bosoncut::PortSubset omega = bosoncut::PortSubset{{2, 3, 4, 5}};
    const std::string base =
        "noclick --unitary " + path.string() + " --ports 1,2,3 --omega 2..5 --xi 0.9";

    const json exact = parse_stdout(run_cli(base));
    REQUIRE(exact.at("value").get<double>() ==
            Catch::Approx(bosoncut::subset_probability(u, input, omega, 0.9).value)
                .epsilon(1e-12));
    REQUIRE(exact.at("omega") == json::array({2, 3, 4, 5}));

    const json truncated = parse_stdout(run_cli(base + " --k 2"));
    const double expected_k =
        bosoncut::truncated_subset_probability(u, input, omega, bosoncut::CutoffPolicy{2, 0.9})
            .value;
    REQUIRE(truncated.at("value").get<double>() == Catch::Approx(expected_k).epsilon(1e-12));

    const json estimated = parse_stdout(run_cli(base + " --estimate 4000 --seed 3"));
    const bosoncut::ProbabilityValue expected_mc =
        bosoncut::subset_probability_estimate(u, input, omega, 0.9, 4000, 3);
    REQUIRE(estimated.at("value").get<double>() ==
            Catch::Approx(expected_mc.value).epsilon(1e-12));
    REQUIRE(estimated.at("std_error").get<double>() ==
            Catch::Approx(expected_mc.std_error).epsilon(1e-12));
    REQUIRE(estimated.at("trials") == 4000);

    REQUIRE(run_cli(base + " --k 2 --estimate 4000").exit_code == 2);
}

TEST_CASE("tvd reports the certified distance") {
    const fs::path path = unitary_file("haar4.json", "--kind haar --dim 4 --seed 13");
    const json out = parse_stdout(
        run_cli("tvd --unitary " + path.string() + " --ports 1,2 --xi 0.7 --k 1"));
    const double tv = out.at("tv_distance").get<double>();
    REQUIRE(tv >= 0.0);
    REQUIRE(out.at("sign_split_gap").get<double>() == Catch::Approx(tv).margin(1e-12));
    REQUIRE(out.at("config_count") == 10);
    REQUIRE(out.at("cutoff") == 1);
    REQUIRE(tv >= std::abs(out.at("delta_p1").get<double>()) - 1e-12);
}

TEST_CASE("bound reproduces the frozen budget") {
    const json out = parse_stdout(
        run_cli("bound --xi 1 --eta 1 --nu 0 --rho 1 --k 1 --n 8 --sigmas 3"));
    REQUIRE(out.at("sample_budget") == 7863);
    REQUIRE(out.at("w1_lower_bound").get<double>() ==
            Catch::Approx(0.06766764161830635).epsilon(1e-12));
    REQUIRE(out.at("regime") == "strong-collision");

    const CliResult overflow =
        run_cli("bound --xi 0.01 --rho 0.01 --k 3 --n 8 --sigmas 5");
    REQUIRE(overflow.exit_code == 3);
}

TEST_CASE("census writes the cutoff table") {
    const fs::path out_csv = work_dir() / "census.csv";
    const json out = parse_stdout(
        run_cli("census --n-range 2..10 --k 2 --xi 9/10 --out " + out_csv.string()));
    REQUIRE(out.at("n_lo") == 2);
    REQUIRE(out.at("n_hi") == 10);

    std::ifstream in(out_csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    REQUIRE(line.rfind("n,", 0) == 0);
    int rows = 0;
    double fraction_at_4 = -1.0;
    while (std::getline(in, line)) {
        ++rows;
        if (line.rfind("4,", 0) == 0) {
            const std::size_t comma = line.find(',');
            fraction_at_4 = std::stod(line.substr(comma + 1));
        }
    }
    REQUIRE(rows == 9);
    // 10 of the 24 permutations of four elements have all cycles <= 2.
    REQUIRE(fraction_at_4 == Catch::Approx(10.0 / 24.0).epsilon(1e-12));

    REQUIRE(run_cli("census --n-range 2..10 --k 2 --xi abc --out " + out_csv.string())
                .exit_code == 2);
    REQUIRE(run_cli("census --n-range 10..2 --k 2 --out " + out_csv.string()).exit_code == 2);
}

TEST_CASE("sample writes readable datasets and guards its models") {
    const fs::path path = unitary_file("haar4s.json", "--kind haar --dim 4 --seed 17");
    const fs::path data = work_dir() / "records.jsonl";
    const json out = parse_stdout(
        run_cli("sample --unitary " + path.string() +
                " --ports 1,2 --model exact --count 300 --seed 5 --xi 0.9 --out " +
                data.string()));
    REQUIRE(out.at("count") == 300);
    REQUIRE(out.at("model") == "exact");
    const bosoncut::SampleSet set = bosoncut::read_sample_set(data);
    REQUIRE(set.records.size() == 300);
    REQUIRE(set.dim == 4);

    const fs::path data2 = work_dir() / "records2.jsonl";
    REQUIRE(run_cli("sample --unitary " + path.string() +
                    " --ports 1,2 --model trunc --count 10 --seed 5 --out " + data2.string())
                .exit_code == 2);
    REQUIRE(run_cli("sample --unitary " + path.string() +
                    " --ports 1,2 --model trunc --k 1 --eta 0.9 --count 10 --seed 5 --out " +
                    data2.string())
                .exit_code == 2);
    REQUIRE(run_cli("sample --unitary " + path.string() +
                    " --ports 1,2 --model exact --k 1 --count 10 --seed 5 --out " +
                    data2.string())
                .exit_code == 2);
    const json kinterf = parse_stdout(
        run_cli("sample --unitary " + path.string() +
                " --ports 1,2 --model kinterf --k 2 --count 50 --seed 6 --xi 0.9 --out " +
                data2.string()));
    REQUIRE(kinterf.at("model") == "k-interfering");
}

TEST_CASE("distinguish runs the two-sample test end to end") {
    const fs::path path = unitary_file("haar4d.json", "--kind haar --dim 4 --seed 19");
    const fs::path a = work_dir() / "dist_a.jsonl";
    const fs::path b = work_dir() / "dist_b.jsonl";
    REQUIRE(run_cli("sample --unitary " + path.string() +
                    " --ports 1,2,3 --model exact --count 2000 --seed 21 --xi 1 --out " +
                    a.string())
                .exit_code == 0);
    REQUIRE(run_cli("sample --unitary " + path.string() +
                    " --ports 1,2,3 --model trunc --k 1 --count 2000 --seed 22 --xi 1 --out " +
                    b.string())
                .exit_code == 0);
    const json out = parse_stdout(
        run_cli("distinguish --a " + a.string() + " --b " + b.string() +
                " --omega 2..4 --sigmas 5"));
    REQUIRE(out.at("a").at("count") == 2000);
    REQUIRE(out.at("b").at("count") == 2000);
    REQUIRE(std::isfinite(out.at("z_score").get<double>()));
    const std::string verdict = out.at("verdict").get<std::string>();
    REQUIRE((verdict == "separated" || verdict == "inconclusive"));

    const fs::path other = unitary_file("haar4e.json", "--kind haar --dim 4 --seed 23");
    const fs::path c = work_dir() / "dist_c.jsonl";
    REQUIRE(run_cli("sample --unitary " + other.string() +
                    " --ports 1,2,3 --model exact --count 100 --seed 24 --xi 1 --out " +
                    c.string())
                .exit_code == 0);
    REQUIRE(run_cli("distinguish --a " + a.string() + " --b " + c.string() + " --omega 2..4")
                .exit_code == 2);
}

TEST_CASE("run executes a config end to end") {
    const fs::path out_dir = work_dir() / "experiment_out";
    const fs::path out_dir2 = work_dir() / "experiment_out2";
    fs::remove_all(out_dir);
    fs::remove_all(out_dir2);
    json config{{"schema_version", 1},
                {"dim", 4},
                {"kind", "haar"},
                {"unitary_seed", 5},
                {"n_bosons", 2},
                {"xi", 0.8},
                {"k_max", 1},
                {"samples", 500},
                {"sample_seed", 9},
                {"target_sigmas", 4.0},
                {"out_dir", out_dir.string()}};
    const fs::path config_path = work_dir() / "config.json";
    {
        std::ofstream out(config_path);
        out << config.dump(2) << "\n";
    }
    const json summary = parse_stdout(run_cli("run --config " + config_path.string()));
    REQUIRE(summary.at("format") == "bosoncut-summary");
    REQUIRE(summary.at("config_hash").get<std::string>().size() == 16);
    REQUIRE(summary.at("sampling").at("count") == 500);
    REQUIRE(summary.at("sampling").at("exact").at("hits").get<long long>() <= 500);
    for (const char* name :
         {"interferometer.json", "exact.jsonl", "truncated.jsonl", "summary.json",
          "summary.csv"}) {
        REQUIRE(fs::exists(out_dir / name));
    }
    const json on_disk = json::parse(slurp(out_dir / "summary.json"));
    REQUIRE(on_disk.at("summary_hash") == summary.at("summary_hash"));

    config["out_dir"] = out_dir2.string();
    {
        std::ofstream out(config_path);
        out << config.dump(2) << "\n";
    }
    const json summary2 = parse_stdout(run_cli("run --config " + config_path.string()));
    REQUIRE(summary2.at("summary_hash") == summary.at("summary_hash"));
    REQUIRE(summary2.at("config_hash") == summary.at("config_hash"));

    config["mystery_knob"] = 3;
    {
        std::ofstream out(config_path);
        out << config.dump(2) << "\n";
    }
    REQUIRE(run_cli("run --config " + config_path.string()).exit_code == 2);
    REQUIRE(run_cli("run --config " + (work_dir() / "absent_config.json").string())
                .exit_code == 4);
}
