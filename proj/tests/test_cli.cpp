// Copyright 2026 The telsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Report-builder checks plus end-to-end runs of the installed CLI binary
// (path passed via the TELSIM_CLI environment variable).

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "telsim/report.hpp"

using namespace telsim;
using Catch::Matchers::WithinAbs;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliResult run_cli(const std::string& args) {
    const char* cli = std::getenv("TELSIM_CLI");
    REQUIRE(cli != nullptr);
    const std::string out_path = "cli_stdout.tmp", err_path = "cli_stderr.tmp";
    const std::string cmd =
        std::string(cli) + " " + args + " >" + out_path + " 2>" + err_path;
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WEXITSTATUS(status);
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

}  // namespace

TEST_CASE("exact report: one-particle worked example", "[cli]") {
    const RunReport report =
        exact_report_one({Complex(1.0), Complex(0.0)}, ChannelSpec({0.6, 0.8}));
    REQUIRE_THAT(report.success_probability_analytic, WithinAbs(0.72, 1e-12));
    REQUIRE(report.success_probability_observed);
    REQUIRE(report.success_probability_analytic == *report.success_probability_observed);
    REQUIRE(report.branches.size() == 16);
    REQUIRE(report.discrepancies.empty());

    const auto j = to_json(report);
    REQUIRE(j["protocol"] == "one");
    REQUIRE(j["success_probability_analytic"].dump() ==
            j["success_probability_observed"].dump());
}

TEST_CASE("exact report: two-particle degenerate case", "[cli]") {
    const RunReport report = exact_report_two(
        {Complex(1.0), Complex(0.0), Complex(0.0), Complex(0.0)},
        ChannelSpec({0.5, 0.5, 0.5, 0.5}));
    REQUIRE_THAT(report.success_probability_analytic, WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(*report.success_probability_observed, WithinAbs(1.0, 1e-12));
    REQUIRE(report.branches.size() == 64);
    // The audit rides along in exact mode and observes listing duplicates.
    bool has_duplicates = false;
    for (const auto& d : report.discrepancies)
        has_duplicates |= d.kind == "duplicate_listing_states";
    REQUIRE(has_duplicates);
}

TEST_CASE("sample report matches analytics within four standard errors", "[cli][statistical]") {
    const std::array<Complex, 2> alpha{Complex(0.8), Complex(0.0, 0.6)};
    const ChannelSpec spec({0.6, 0.8});
    const RunReport report = sample_report_one(alpha, spec, 20000, 7);
    REQUIRE(report.trials);
    REQUIRE(*report.trials == 20000);
    const double p = 0.72;
    const double se = std::sqrt(p * (1.0 - p) / 20000.0);
    REQUIRE(std::abs(*report.success_probability_observed - p) <= 4.0 * se);
    REQUIRE(*report.mean_conditional_fidelity >= 1.0 - 1e-10);
    long long total = 0;
    for (const auto& b : report.branches) total += *b.count;
    REQUIRE(total == 20000);
}

TEST_CASE("csv and text renderings are well formed", "[cli]") {
    const RunReport report =
        exact_report_one({Complex(1.0), Complex(0.0)}, ChannelSpec({0.6, 0.8}));
    const std::string csv = to_csv(report);
    REQUIRE(csv.find("bell,charlie,aux,probability,fidelity\n") != std::string::npos);
    REQUIRE(csv.find("# success_probability_analytic=0.72\n") != std::string::npos);
    const std::string text = to_text(report);
    REQUIRE(text.find("success probability (analytic): 0.72") != std::string::npos);
}

TEST_CASE("cli: exact one-particle run reports 0.72", "[cli][subprocess]") {
    const CliResult r =
        run_cli("--protocol one --beta 0.6,0.8 --alpha 1,0 --mode exact --output json");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE_THAT(j["success_probability_analytic"].get<double>(), WithinAbs(0.72, 1e-12));
    REQUIRE(j["branches"].size() == 16);
}

TEST_CASE("cli: degenerate two-particle run reports probability 1", "[cli][subprocess]") {
    const CliResult r = run_cli(
        "--protocol two --beta 0.5,0.5,0.5,0.5 --alpha 1,0,0,0 --mode exact --output json");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE_THAT(j["success_probability_analytic"].get<double>(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("cli: constraint violations exit 2 with a named diagnostic", "[cli][subprocess]") {
    const CliResult r = run_cli("--protocol one --beta 0.8,0.6 --alpha 1,0 --mode exact");
    REQUIRE(r.exit_code == 2);
    REQUIRE(r.err.find("beta[0] must not exceed beta[1]") != std::string::npos);

    const CliResult bad_flag = run_cli("--protocol three --beta 0.6,0.8 --alpha 1,0");
    REQUIRE(bad_flag.exit_code == 2);
    REQUIRE(bad_flag.err.find("--protocol") != std::string::npos);

    const CliResult bad_alpha = run_cli("--protocol one --beta 0.6,0.8 --alpha 0.5,0.5");
    REQUIRE(bad_alpha.exit_code == 2);
    REQUIRE(bad_alpha.err.find("normalized") != std::string::npos);
}

TEST_CASE("cli: complex alpha entries parse", "[cli][subprocess]") {
    const CliResult r = run_cli(
        "--protocol one --beta 0.6,0.8 --alpha 0.8,0.6i --mode exact --output json");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE_THAT(j["alpha"][1][1].get<double>(), WithinAbs(0.6, 1e-12));

    const CliResult full = run_cli(
        "--protocol one --beta 0.6,0.8 --alpha=-0.6-0.48i,0.64 --mode exact");
    REQUIRE(full.exit_code == 0);
}

TEST_CASE("cli: dump-circuit netlists", "[cli][subprocess]") {
    SECTION("u1 emits six gates and a deviation comment") {
        const CliResult r = run_cli("--dump-circuit u1 --beta 0.6,0.8");
        REQUIRE(r.exit_code == 0);
        int gate_lines = 0, cnot53 = 0, cnot35 = 0, rotations = 0;
        std::istringstream in(r.out);
        std::string line;
        std::string last;
        while (std::getline(in, line)) {
            if (line.rfind("GATE ", 0) == 0) ++gate_lines;
            if (line.rfind("GATE CNOT 3 5", 0) == 0) ++cnot53;
            if (line.rfind("GATE CNOT 5 3", 0) == 0) ++cnot35;
            if (line.rfind("GATE RY", 0) == 0) ++rotations;
            last = line;
        }
        REQUIRE(gate_lines == 6);
        REQUIRE(cnot53 == 2);
        REQUIRE(cnot35 == 2);
        REQUIRE(rotations == 2);
        REQUIRE(last.rfind("# max deviation from target:", 0) == 0);
        const double deviation = std::stod(last.substr(last.rfind(':') + 1));
        REQUIRE(deviation <= 1e-12);
    }
    SECTION("u2 with equal betas has all-zero angles") {
        const CliResult r = run_cli("--dump-circuit u2 --beta 0.5,0.5,0.5,0.5");
        REQUIRE(r.exit_code == 0);
        std::istringstream in(r.out);
        std::string line;
        while (std::getline(in, line)) {
            if (line.rfind("GATE RY", 0) != 0) continue;
            REQUIRE_THAT(std::stod(line.substr(line.rfind(' '))), WithinAbs(0.0, 1e-15));
        }
    }
    SECTION("channel1 is three gates") {
        const CliResult r = run_cli("--dump-circuit channel1 --beta 0.6,0.8");
        REQUIRE(r.exit_code == 0);
        int gate_lines = 0;
        std::istringstream in(r.out);
        std::string line;
        while (std::getline(in, line))
            if (line.rfind("GATE ", 0) == 0) ++gate_lines;
        REQUIRE(gate_lines == 3);
        REQUIRE(r.out.find("GATE R 2 ") != std::string::npos);
    }
    SECTION("unknown circuit name") {
        const CliResult r = run_cli("--dump-circuit bogus --beta 0.6,0.8");
        REQUIRE(r.exit_code == 2);
    }
}

TEST_CASE("cli: identical flags and seed give byte-identical reports", "[cli][subprocess]") {
    const std::string flags =
        "--protocol one --beta 0.6,0.8 --alpha 0.8,0.6i --mode sample --trials 5000 "
        "--seed 42 --output json";
    const CliResult a = run_cli(flags);
    const CliResult b = run_cli(flags);
    REQUIRE(a.exit_code == 0);
    REQUIRE(a.out == b.out);
    REQUIRE_FALSE(a.out.empty());
}
