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

// Command-line front end: runs the one- and two-particle teleportation
// protocols in exact or Monte-Carlo mode and dumps the synthesized circuits.
// Reports go to stdout (json/csv/text); diagnostics go to stderr.

#include <array>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "telsim/report.hpp"
#include "telsim/telsim.hpp"

namespace {

using telsim::Complex;

// Parses one complex token of the form "re", "imi", or "re+imi" (also with
// '-' signs), e.g. "0.8", "0.6i", "0.8+0.6i", "-0.3-0.4i".
Complex parse_complex(const std::string& token) {
    if (token.empty()) throw telsim::Error("empty complex number");
    const bool imaginary = token.back() == 'i' || token.back() == 'I';
    std::string body = imaginary ? token.substr(0, token.size() - 1) : token;

    auto to_double = [](const std::string& text, bool allow_bare_sign) -> double {
        if (allow_bare_sign && (text.empty() || text == "+" )) return 1.0;
        if (allow_bare_sign && text == "-") return -1.0;
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw telsim::Error("malformed number '" + text + "'");
        return value;
    };

    // Split at the last '+'/'-' that is not a leading sign or an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    try {
        if (!imaginary) return Complex(to_double(body, false), 0.0);
        if (split == std::string::npos) return Complex(0.0, to_double(body, true));
        return Complex(to_double(body.substr(0, split), false),
                       to_double(body.substr(split), true));
    } catch (const std::exception&) {
        throw telsim::Error("malformed complex number '" + token + "'");
    }
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(text.substr(start));
            return out;
        }
        out.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
}

// Off-by-a-little inputs are renormalized with a warning; anything beyond
// 1e-6 is rejected so real mistakes are not papered over.
template <std::size_t N>
std::array<Complex, N> parse_alpha(const std::string& text) {
    const auto tokens = split_commas(text);
    if (tokens.size() != N)
        throw telsim::Error("alpha requires " + std::to_string(N) + " comma-separated entries");
    std::array<Complex, N> alpha;
    double sq = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        alpha[i] = parse_complex(tokens[i]);
        sq += std::norm(alpha[i]);
    }
    const double off = std::abs(sq - 1.0);
    if (off > 1e-6)
        throw telsim::Error("alpha amplitudes must be normalized (off by " +
                            std::to_string(off) + ")");
    if (off > telsim::kNormTol) {
        std::cerr << "warning: alpha renormalized (squared norm off by " << off << ")\n";
        const double scale = 1.0 / std::sqrt(sq);
        for (Complex& a : alpha) a *= scale;
    }
    return alpha;
}

telsim::ChannelSpec parse_beta(const std::string& text, std::size_t expected) {
    const auto tokens = split_commas(text);
    if (tokens.size() != expected)
        throw telsim::Error("beta requires " + std::to_string(expected) +
                            " comma-separated entries");
    std::vector<double> betas;
    double sq = 0.0;
    for (const std::string& tok : tokens) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw telsim::Error("malformed beta value '" + tok + "'");
        }
        if (used != tok.size()) throw telsim::Error("malformed beta value '" + tok + "'");
        betas.push_back(value);
        sq += value * value;
    }
    const double off = std::abs(sq - 1.0);
    if (off > 1e-6)
        throw telsim::Error("beta values must satisfy sum of squares = 1 (off by " +
                            std::to_string(off) + ")");
    if (off > telsim::kNormTol) {
        std::cerr << "warning: beta renormalized (squared norm off by " << off << ")\n";
        const double scale = 1.0 / std::sqrt(sq);
        for (double& b : betas) b *= scale;
    }
    return telsim::ChannelSpec(betas);
}

int dump_circuit(const std::string& name, const std::string& beta_text) {
    using namespace telsim;
    std::vector<GateOp> ops;
    double deviation = 0.0;
    if (name == "u1") {
        const ChannelSpec spec = parse_beta(beta_text, 2);
        ops = u1_circuit(spec);
        deviation = assert_equivalent(compose(ops, {3, 5}), u1_matrix(spec), 1e-12).max_deviation;
    } else if (name == "u2") {
        const ChannelSpec spec = parse_beta(beta_text, 4);
        ops = u2_circuit(spec);
        deviation =
            assert_equivalent(compose(ops, {5, 6, 8}), u2_matrix(spec), 1e-12).max_deviation;
    } else if (name == "channel1") {
        const ChannelSpec spec = parse_beta(beta_text, 2);
        ops = channel_one_circuit(spec);
        StateVector s = StateVector::zero_register(3, {2, 3, 4});
        for (const GateOp& op : ops) apply_in_place(s, op);
        const StateVector direct = channel_one(spec);
        for (std::size_t i = 0; i < s.dimension(); ++i)
            deviation = std::max(deviation, std::abs(s.amplitude(i) - direct.amplitude(i)));
    } else if (name == "channel2") {
        const ChannelSpec spec = parse_beta(beta_text, 4);
        ops = channel_two_circuit(spec);
        StateVector s = StateVector::zero_register(5, {3, 4, 5, 6, 7});
        for (const GateOp& op : ops) apply_in_place(s, op);
        const StateVector direct = channel_two(spec);
        for (std::size_t i = 0; i < s.dimension(); ++i)
            deviation = std::max(deviation, std::abs(s.amplitude(i) - direct.amplitude(i)));
    } else {
        throw Error("unknown circuit name '" + name + "'");
    }
    std::cout << netlist(ops);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", deviation);
    std::cout << "# max deviation from target: " << buf << "\n";
    return 0;
}

void print_report(const telsim::RunReport& report, const std::string& output) {
    if (output == "json")
        std::cout << telsim::to_json(report).dump(2) << "\n";
    else if (output == "csv")
        std::cout << telsim::to_csv(report);
    else
        std::cout << telsim::to_text(report);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and Monte-Carlo simulation of probabilistic controlled teleportation"};
    app.get_formatter()->column_width(34);

    std::string protocol, alpha_text, beta_text, dump_name;
    std::string mode = "exact", output = "text";
    long long trials = 100000;
    std::uint64_t seed = 0;

    app.add_option("--protocol", protocol, "Protocol to run: one | two")
        ->check(CLI::IsMember({"one", "two"}));
    app.add_option("--alpha", alpha_text,
                   "Input amplitudes, comma separated; entries accept re+imi form");
    app.add_option("--beta", beta_text, "Channel coefficients, comma separated reals");
    app.add_option("--mode", mode, "exact | sample")->check(CLI::IsMember({"exact", "sample"}));
    app.add_option("--trials", trials, "Monte-Carlo trials (sample mode)")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Base RNG seed (sample mode)");
    app.add_option("--output", output, "json | csv | text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--dump-circuit", dump_name,
                   "Emit a gate netlist instead of running: u1 | u2 | channel1 | channel2")
        ->check(CLI::IsMember({"u1", "u2", "channel1", "channel2"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (!dump_name.empty()) {
            if (beta_text.empty()) throw telsim::Error("--dump-circuit requires --beta");
            return dump_circuit(dump_name, beta_text);
        }
        if (protocol.empty()) throw telsim::Error("--protocol is required (one | two)");
        if (beta_text.empty()) throw telsim::Error("--beta is required");
        if (alpha_text.empty()) throw telsim::Error("--alpha is required");

        if (protocol == "one") {
            const auto alpha = parse_alpha<2>(alpha_text);
            const telsim::ChannelSpec spec = parse_beta(beta_text, 2);
            print_report(mode == "exact"
                             ? telsim::exact_report_one(alpha, spec)
                             : telsim::sample_report_one(alpha, spec, trials, seed),
                         output);
        } else {
            const auto alpha = parse_alpha<4>(alpha_text);
            const telsim::ChannelSpec spec = parse_beta(beta_text, 4);
            print_report(mode == "exact"
                             ? telsim::exact_report_two(alpha, spec)
                             : telsim::sample_report_two(alpha, spec, trials, seed),
                         output);
        }
    } catch (const telsim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
