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

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "telsim/protocol_one.hpp"
#include "telsim/protocol_two.hpp"

namespace telsim {

/// Reported values are rounded to 12 significant digits; well inside every
/// analytic tolerance, and it keeps the exact-mode observed probability and
/// the analytic formula printing identical digits.
inline double round_sig(double x, int digits = 12) {
    if (x == 0.0 || !std::isfinite(x)) return x;
    const int exponent = static_cast<int>(std::floor(std::log10(std::abs(x))));
    const double mag = std::pow(10.0, digits - 1 - exponent);
    return std::round(x * mag) / mag;
}

struct BranchEntry {
    std::vector<std::pair<std::string, int>> outcomes;
    std::optional<double> probability;  // exact mode
    std::optional<long long> count;     // sample mode
    std::optional<double> fidelity;     // successful branches only
};

struct DiscrepancyEntry {
    std::string kind;  // "listing_mismatch" | "duplicate_listing_states"
    int first = 0;
    int second = 0;
    double deviation = 0.0;
};

struct RunReport {
    std::string protocol;  // "one" | "two"
    std::vector<Complex> alpha;
    std::vector<double> beta;
    std::string mode;  // "exact" | "sample"
    double success_probability_analytic = 0.0;
    std::optional<double> success_probability_observed;
    std::optional<double> success_probability_stderr;
    std::optional<double> mean_conditional_fidelity;
    std::optional<long long> trials;
    std::optional<std::uint64_t> seed;
    std::vector<BranchEntry> branches;
    std::vector<DiscrepancyEntry> discrepancies;
};

namespace detail {

inline std::vector<std::pair<std::string, int>> named_outcomes_one(const std::vector<int>& o) {
    return {{"bell", o[0]}, {"charlie", o[1]}, {"aux", o[2]}};
}

inline std::vector<std::pair<std::string, int>> named_outcomes_two(const std::vector<int>& o) {
    return {{"bell23", o[0]}, {"bell14", o[1]}, {"charlie", o[2]}, {"aux", o[3]}};
}

inline void fill_exact_branches(
    RunReport& report, const std::vector<ProtocolResult>& branches,
    const std::function<std::vector<std::pair<std::string, int>>(const std::vector<int>&)>&
        name_outcomes) {
    double observed = 0.0;
    double fidelity_mass = 0.0;
    for (const ProtocolResult& r : branches) {
        BranchEntry entry;
        entry.outcomes = name_outcomes(r.outcomes);
        entry.probability = round_sig(*r.probability);
        if (r.fidelity) entry.fidelity = round_sig(*r.fidelity);
        report.branches.push_back(std::move(entry));
        if (r.success) {
            observed += *r.probability;
            if (r.fidelity) fidelity_mass += *r.probability * *r.fidelity;
        }
    }
    report.success_probability_observed = round_sig(observed);
    if (observed > 0.0) report.mean_conditional_fidelity = round_sig(fidelity_mass / observed);
}

inline void audit_into_report(RunReport& report, const ListingAuditReport& audit) {
    for (const ListingComparison& row : audit.assist_stage)
        if (!row.matches)
            report.discrepancies.push_back(
                {"listing_mismatch", row.index, row.index, round_sig(row.deviation)});
    for (const ListingComparison& row : audit.recovery_stage)
        if (!row.matches)
            report.discrepancies.push_back(
                {"listing_mismatch", row.index, row.index, round_sig(row.deviation)});
    for (const DuplicateObservation& dup : audit.duplicates)
        report.discrepancies.push_back({"duplicate_listing_states", dup.first, dup.second, 0.0});
}

}  // namespace detail

inline RunReport exact_report_one(const std::array<Complex, 2>& alpha, const ChannelSpec& spec) {
    RunReport report;
    report.protocol = "one";
    report.alpha.assign(alpha.begin(), alpha.end());
    report.beta = spec.betas();
    report.mode = "exact";
    report.success_probability_analytic = round_sig(success_probability_one(spec));
    detail::fill_exact_branches(report, exact_branches_one(alpha, spec),
                                detail::named_outcomes_one);
    return report;
}

inline RunReport exact_report_two(const std::array<Complex, 4>& alpha, const ChannelSpec& spec) {
    RunReport report;
    report.protocol = "two";
    report.alpha.assign(alpha.begin(), alpha.end());
    report.beta = spec.betas();
    report.mode = "exact";
    report.success_probability_analytic = round_sig(success_probability_two(spec));
    detail::fill_exact_branches(report, exact_branches_two(alpha, spec),
                                detail::named_outcomes_two);
    detail::audit_into_report(report, audit_branch_listings(alpha, spec));
    return report;
}

namespace detail {

template <typename TeleportFn, typename NameFn>
RunReport sample_report(const std::string& protocol, TeleportFn teleport, NameFn name_outcomes,
                        const std::vector<std::vector<int>>& outcome_grid, double analytic,
                        long long trials, std::uint64_t seed) {
    RunReport report;
    report.protocol = protocol;
    report.mode = "sample";
    report.trials = trials;
    report.seed = seed;
    report.success_probability_analytic = round_sig(analytic);

    std::map<std::vector<int>, std::pair<long long, double>> tallies;
    long long successes = 0;
    double fidelity_sum = 0.0;
    const RngStream base(seed);
    for (long long t = 0; t < trials; ++t) {
        RngStream stream = base.derived(static_cast<std::uint64_t>(t));
        const ProtocolResult r = teleport(stream);
        auto& [count, fid] = tallies[r.outcomes];
        ++count;
        if (r.success && r.fidelity) {
            fid += *r.fidelity;
            fidelity_sum += *r.fidelity;
            ++successes;
        }
    }

    const double rate = static_cast<double>(successes) / static_cast<double>(trials);
    report.success_probability_observed = round_sig(rate);
    report.success_probability_stderr =
        round_sig(std::sqrt(std::max(rate * (1.0 - rate) / static_cast<double>(trials), 0.0)));
    if (successes > 0)
        report.mean_conditional_fidelity =
            round_sig(fidelity_sum / static_cast<double>(successes));

    for (const std::vector<int>& outcomes : outcome_grid) {
        BranchEntry entry;
        entry.outcomes = name_outcomes(outcomes);
        const auto it = tallies.find(outcomes);
        const long long count = it == tallies.end() ? 0 : it->second.first;
        entry.count = count;
        const bool success_branch = outcomes.back() == 0;
        if (success_branch && count > 0)
            entry.fidelity = round_sig(it->second.second / static_cast<double>(count));
        report.branches.push_back(std::move(entry));
    }
    return report;
}

inline std::vector<std::vector<int>> outcome_grid_one() {
    std::vector<std::vector<int>> grid;
    for (int bell = 0; bell < 4; ++bell)
        for (int charlie = 0; charlie < 2; ++charlie)
            for (int aux = 0; aux < 2; ++aux) grid.push_back({bell, charlie, aux});
    return grid;
}

inline std::vector<std::vector<int>> outcome_grid_two() {
    std::vector<std::vector<int>> grid;
    for (int b23 = 0; b23 < 4; ++b23)
        for (int b14 = 0; b14 < 4; ++b14)
            for (int charlie = 0; charlie < 2; ++charlie)
                for (int aux = 0; aux < 2; ++aux) grid.push_back({b23, b14, charlie, aux});
    return grid;
}

}  // namespace detail

inline RunReport sample_report_one(const std::array<Complex, 2>& alpha, const ChannelSpec& spec,
                                   long long trials, std::uint64_t seed) {
    RunReport report = detail::sample_report(
        "one", [&](RngStream& rng) { return teleport_one(alpha, spec, rng); },
        detail::named_outcomes_one, detail::outcome_grid_one(), success_probability_one(spec),
        trials, seed);
    report.alpha.assign(alpha.begin(), alpha.end());
    report.beta = spec.betas();
    return report;
}

inline RunReport sample_report_two(const std::array<Complex, 4>& alpha, const ChannelSpec& spec,
                                   long long trials, std::uint64_t seed) {
    RunReport report = detail::sample_report(
        "two", [&](RngStream& rng) { return teleport_two(alpha, spec, rng); },
        detail::named_outcomes_two, detail::outcome_grid_two(), success_probability_two(spec),
        trials, seed);
    report.alpha.assign(alpha.begin(), alpha.end());
    report.beta = spec.betas();
    return report;
}

inline nlohmann::ordered_json to_json(const RunReport& report) {
    nlohmann::ordered_json j;
    j["protocol"] = report.protocol;
    auto alpha = nlohmann::ordered_json::array();
    for (const Complex& a : report.alpha) alpha.push_back({a.real(), a.imag()});
    j["alpha"] = std::move(alpha);
    j["beta"] = report.beta;
    j["mode"] = report.mode;
    j["success_probability_analytic"] = report.success_probability_analytic;
    if (report.success_probability_observed)
        j["success_probability_observed"] = *report.success_probability_observed;
    if (report.success_probability_stderr)
        j["success_probability_stderr"] = *report.success_probability_stderr;
    if (report.mean_conditional_fidelity)
        j["mean_conditional_fidelity"] = *report.mean_conditional_fidelity;
    if (report.trials) j["trials"] = *report.trials;
    if (report.seed) j["seed"] = *report.seed;

    auto branches = nlohmann::ordered_json::array();
    for (const BranchEntry& b : report.branches) {
        nlohmann::ordered_json entry;
        nlohmann::ordered_json outcomes;
        for (const auto& [name, value] : b.outcomes) outcomes[name] = value;
        entry["outcomes"] = std::move(outcomes);
        if (b.probability) entry["probability"] = *b.probability;
        if (b.count) entry["count"] = *b.count;
        if (b.fidelity) entry["fidelity"] = *b.fidelity;
        else entry["fidelity"] = nullptr;
        branches.push_back(std::move(entry));
    }
    j["branches"] = std::move(branches);

    auto discrepancies = nlohmann::ordered_json::array();
    for (const DiscrepancyEntry& d : report.discrepancies) {
        nlohmann::ordered_json entry;
        entry["kind"] = d.kind;
        entry["first"] = d.first;
        entry["second"] = d.second;
        if (d.kind == "listing_mismatch") entry["deviation"] = d.deviation;
        discrepancies.push_back(std::move(entry));
    }
    j["discrepancies"] = std::move(discrepancies);
    return j;
}

namespace detail {

inline std::string format_double(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string format_complex(const Complex& a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.12g%+.12gi", a.real(), a.imag());
    return buf;
}

}  // namespace detail

inline std::string to_csv(const RunReport& report) {
    std::string out;
    out += "# protocol=" + report.protocol + "\n";
    out += "# mode=" + report.mode + "\n";
    out += "# alpha=";
    for (std::size_t i = 0; i < report.alpha.size(); ++i)
        out += (i ? "," : "") + detail::format_complex(report.alpha[i]);
    out += "\n# beta=";
    for (std::size_t i = 0; i < report.beta.size(); ++i)
        out += (i ? "," : "") + detail::format_double(report.beta[i]);
    out += "\n# success_probability_analytic=" +
           detail::format_double(report.success_probability_analytic) + "\n";
    if (report.success_probability_observed)
        out += "# success_probability_observed=" +
               detail::format_double(*report.success_probability_observed) + "\n";
    if (report.trials) out += "# trials=" + std::to_string(*report.trials) + "\n";
    if (report.seed) out += "# seed=" + std::to_string(*report.seed) + "\n";

    for (std::size_t i = 0; i < report.branches.front().outcomes.size(); ++i)
        out += (i ? "," : "") + report.branches.front().outcomes[i].first;
    out += report.mode == "exact" ? ",probability,fidelity\n" : ",count,fidelity\n";
    for (const BranchEntry& b : report.branches) {
        for (std::size_t i = 0; i < b.outcomes.size(); ++i)
            out += (i ? "," : "") + std::to_string(b.outcomes[i].second);
        if (b.probability) out += "," + detail::format_double(*b.probability);
        if (b.count) out += "," + std::to_string(*b.count);
        out += ",";
        if (b.fidelity) out += detail::format_double(*b.fidelity);
        out += "\n";
    }
    return out;
}

inline std::string to_text(const RunReport& report) {
    std::string out;
    out += "protocol " + report.protocol + " (" + report.mode + " mode)\n";
    out += "alpha:";
    for (const Complex& a : report.alpha) out += " " + detail::format_complex(a);
    out += "\nbeta:";
    for (double b : report.beta) out += " " + detail::format_double(b);
    out += "\nsuccess probability (analytic): " +
           detail::format_double(report.success_probability_analytic) + "\n";
    if (report.success_probability_observed) {
        out += "success probability (observed): " +
               detail::format_double(*report.success_probability_observed);
        if (report.success_probability_stderr)
            out += " +- " + detail::format_double(*report.success_probability_stderr);
        out += "\n";
    }
    if (report.mean_conditional_fidelity)
        out += "mean conditional fidelity: " +
               detail::format_double(*report.mean_conditional_fidelity) + "\n";
    if (report.trials) out += "trials: " + std::to_string(*report.trials) + "\n";
    if (report.seed) out += "seed: " + std::to_string(*report.seed) + "\n";

    out += "branches:\n";
    for (const BranchEntry& b : report.branches) {
        out += " ";
        for (const auto& [name, value] : b.outcomes)
            out += " " + name + "=" + std::to_string(value);
        if (b.probability) out += "  p=" + detail::format_double(*b.probability);
        if (b.count) out += "  count=" + std::to_string(*b.count);
        if (b.fidelity) out += "  fidelity=" + detail::format_double(*b.fidelity);
        out += "\n";
    }
    if (!report.discrepancies.empty()) {
        out += "listing audit:\n";
        for (const DiscrepancyEntry& d : report.discrepancies) {
            out += "  " + d.kind + " " + std::to_string(d.first) + " " +
                   std::to_string(d.second);
            if (d.kind == "listing_mismatch")
                out += " deviation=" + detail::format_double(d.deviation);
            out += "\n";
        }
    }
    return out;
}

}  // namespace telsim
