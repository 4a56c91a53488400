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

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "telsim/common.hpp"
#include "telsim/gates.hpp"
#include "telsim/state.hpp"

namespace telsim {

/// Counter-based deterministic generator (splitmix64 family).  Identical
/// seeds reproduce identical sequences bit-for-bit; derived streams are
/// independent functions of (seed, index) so parallel trials stay
/// reproducible regardless of worker count.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() { return mix(seed_ + ++counter_ * 0x9E3779B97F4A7C15ULL); }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Stream derived from the base seed and an index; unaffected by draws
    /// already made on this stream.
    RngStream derived(std::uint64_t index) const {
        return RngStream(mix(seed_ ^ mix((index + 1) * 0xD1B54A32D192ED03ULL)));
    }

    std::uint64_t seed() const { return seed_; }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

/// Measurement bases.  Z outcomes are 0/1; X outcomes 0/1 map to
/// (|0>+|1>)/sqrt2 and (|0>-|1>)/sqrt2; Bell outcomes 0..3 map to
/// Phi+, Phi-, Psi+, Psi- (code = 2*parity + phase).
enum class MeasureBasis { Z, X, Bell };

/// One sampled measurement: outcome code, its Born probability, and the
/// collapsed renormalized state.  Measured qubits stay in the register,
/// pinned to the outcome's computational marker; a Bell outcome writes
/// (phase, parity) onto its two qubits.
struct MeasureOutcome {
    std::vector<QubitLabel> labels;
    int outcome = 0;
    double probability = 0.0;
    StateVector post_state;
};

/// Exact outcome split: probability plus the renormalized post-state, or
/// nullopt for branches whose probability vanishes.
struct OutcomeSplit {
    double probability = 0.0;
    std::optional<StateVector> state;
};

namespace detail {

inline std::optional<StateVector> renormalized(const StateVector& reg,
                                               std::vector<Complex> amps, double probability) {
    if (probability <= kVanishedBranchTol) return std::nullopt;
    const double scale = 1.0 / std::sqrt(probability);
    for (Complex& a : amps) a *= scale;
    return StateVector::from_amplitudes(reg.labels(), std::move(amps));
}

}  // namespace detail

/// Exact Z-basis split of one qubit.
inline std::vector<OutcomeSplit> split_z(const StateVector& s, QubitLabel label) {
    const std::size_t mask = s.position_mask(s.position_of(label));
    std::vector<std::vector<Complex>> proja(2, std::vector<Complex>(s.dimension(), Complex(0.0)));
    double p[2] = {0.0, 0.0};
    for (std::size_t idx = 0; idx < s.dimension(); ++idx) {
        const int b = (idx & mask) ? 1 : 0;
        proja[b][idx] = s.amplitude(idx);
        p[b] += std::norm(s.amplitude(idx));
    }
    std::vector<OutcomeSplit> out(2);
    for (int b = 0; b < 2; ++b)
        out[b] = {p[b], detail::renormalized(s, std::move(proja[b]), p[b])};
    return out;
}

/// Exact X-basis split, realized as H followed by a Z split; the measured
/// qubit ends in the computational marker of the outcome.
inline std::vector<OutcomeSplit> split_x(const StateVector& s, QubitLabel label) {
    return split_z(apply(s, hadamard(label)), label);
}

/// Exact Bell-basis split of two qubits via rank-1 projectors onto the four
/// Bell states.  The outcome's (phase, parity) bits are written back onto
/// (label_a, label_b) as a computational marker.
inline std::vector<OutcomeSplit> split_bell(const StateVector& s, QubitLabel label_a,
                                            QubitLabel label_b) {
    if (label_a == label_b) throw Error("Bell measurement requires two distinct qubits");
    const std::size_t ma = s.position_mask(s.position_of(label_a));
    const std::size_t mb = s.position_mask(s.position_of(label_b));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    std::vector<OutcomeSplit> out(4);
    for (int code = 0; code < 4; ++code) {
        const int phase = code & 1;
        const int parity = code >> 1;
        // <Bell_code| contracts (q_a, q_b) = (c, c^parity) with sign (-1)^(phase*c).
        std::vector<Complex> amps(s.dimension(), Complex(0.0));
        double p = 0.0;
        const std::size_t marker = (phase ? ma : 0u) | (parity ? mb : 0u);
        for (std::size_t idx = 0; idx < s.dimension(); ++idx) {
            if ((idx & ma) || (idx & mb)) continue;  // enumerate rest via a=b=0 slots
            const std::size_t idx0 = idx | (parity ? mb : 0u);          // c = 0
            const std::size_t idx1 = idx | ma | (parity ? 0u : mb);     // c = 1
            const Complex c0 = s.amplitude(idx0);
            const Complex c1 = s.amplitude(idx1);
            const Complex proj = (phase ? (c0 - c1) : (c0 + c1)) * inv_sqrt2;
            amps[idx | marker] = proj;
            p += std::norm(proj);
        }
        out[code] = {p, detail::renormalized(s, std::move(amps), p)};
    }
    return out;
}

namespace detail {

inline int pick_outcome(const std::vector<OutcomeSplit>& splits, RngStream& rng) {
    double total = 0.0;
    for (const OutcomeSplit& o : splits) total += o.probability;
    if (std::abs(total - 1.0) > kProbabilitySumTol)
        throw Error("measurement probabilities do not sum to 1 (corrupted state)");
    const double u = rng.next_double() * total;
    double acc = 0.0;
    int fallback = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < splits.size(); ++k) {
        if (splits[k].probability > best) {
            best = splits[k].probability;
            fallback = static_cast<int>(k);
        }
        acc += splits[k].probability;
        if (u < acc && splits[k].state) return static_cast<int>(k);
    }
    return fallback;
}

}  // namespace detail

/// Projective Z measurement with collapse and renormalization.
inline MeasureOutcome measure_z(const StateVector& s, QubitLabel label, RngStream& rng) {
    auto splits = split_z(s, label);
    const int k = detail::pick_outcome(splits, rng);
    return {{label}, k, splits[k].probability, *splits[k].state};
}

/// X-basis measurement (H then measure_z); distributionally identical to
/// projecting onto the two X-basis states.
inline MeasureOutcome measure_x(const StateVector& s, QubitLabel label, RngStream& rng) {
    auto splits = split_x(s, label);
    const int k = detail::pick_outcome(splits, rng);
    return {{label}, k, splits[k].probability, *splits[k].state};
}

/// Bell-basis measurement of two qubits.
inline MeasureOutcome measure_bell(const StateVector& s, QubitLabel label_a, QubitLabel label_b,
                                   RngStream& rng) {
    auto splits = split_bell(s, label_a, label_b);
    const int k = detail::pick_outcome(splits, rng);
    return {{label_a, label_b}, k, splits[k].probability, *splits[k].state};
}

/// Circuit step of a measurement plan.
struct GateStep {
    GateOp op;
};

/// Classical feed-forward: apply `op` on branches whose recorded outcome at
/// `measurement` (index among the plan's measurement steps) is in `when`.
struct CondGateStep {
    GateOp op;
    std::size_t measurement;
    std::vector<int> when;
};

struct MeasureStep {
    MeasureBasis basis;
    QubitLabel a;
    QubitLabel b = -1;  // Bell only
};

using PlanStep = std::variant<GateStep, CondGateStep, MeasureStep>;
using Plan = std::vector<PlanStep>;

/// One exact outcome path: outcome codes in plan order, joint probability,
/// and the collapsed state.  Zero-probability branches are retained with a
/// flagged empty state so branch indexing stays stable.
struct BranchRecord {
    std::vector<int> outcomes;
    double probability = 0.0;
    std::optional<StateVector> state;

    bool vanished() const { return !state.has_value(); }
};

namespace detail {

inline std::vector<OutcomeSplit> split_step(const StateVector& s, const MeasureStep& m) {
    switch (m.basis) {
        case MeasureBasis::Z: return split_z(s, m.a);
        case MeasureBasis::X: return split_x(s, m.a);
        case MeasureBasis::Bell: return split_bell(s, m.a, m.b);
    }
    throw Error("unknown measurement basis");
}

inline bool condition_holds(const CondGateStep& step, const std::vector<int>& outcomes) {
    if (step.measurement >= outcomes.size())
        throw Error("conditional gate references a measurement that has not happened");
    for (int v : step.when)
        if (outcomes[step.measurement] == v) return true;
    return false;
}

}  // namespace detail

/// Circuit realization of the Bell measurement (the projector route is
/// normative; this one is tested equivalent).  Measuring a yields the phase
/// bit and b the parity bit, so code = 2*outcome[b] + outcome[a].
inline Plan bell_measurement_circuit(QubitLabel a, QubitLabel b) {
    return {GateStep{cnot(a, b)}, GateStep{hadamard(a)}, MeasureStep{MeasureBasis::Z, a},
            MeasureStep{MeasureBasis::Z, b}};
}

/// Exact enumeration of every outcome path of a plan.  No sampling: each
/// measurement splits every live branch with Born probabilities, and the
/// joint probabilities over all branches sum to 1 within 1e-10.  Branches
/// are ordered lexicographically by outcome tuple.
inline std::vector<BranchRecord> enumerate_branches(const StateVector& s, const Plan& plan) {
    std::vector<BranchRecord> branches{{{}, 1.0, s}};
    for (const PlanStep& step : plan) {
        if (const auto* g = std::get_if<GateStep>(&step)) {
            for (BranchRecord& b : branches)
                if (b.state) apply_in_place(*b.state, g->op);
        } else if (const auto* cg = std::get_if<CondGateStep>(&step)) {
            for (BranchRecord& b : branches)
                if (b.state && detail::condition_holds(*cg, b.outcomes))
                    apply_in_place(*b.state, cg->op);
        } else {
            const auto& m = std::get<MeasureStep>(step);
            const int num_outcomes = m.basis == MeasureBasis::Bell ? 4 : 2;
            std::vector<BranchRecord> next;
            next.reserve(branches.size() * num_outcomes);
            for (BranchRecord& b : branches) {
                if (!b.state) {
                    for (int k = 0; k < num_outcomes; ++k) {
                        BranchRecord dead{b.outcomes, 0.0, std::nullopt};
                        dead.outcomes.push_back(k);
                        next.push_back(std::move(dead));
                    }
                    continue;
                }
                auto splits = detail::split_step(*b.state, m);
                for (int k = 0; k < num_outcomes; ++k) {
                    BranchRecord child{b.outcomes, b.probability * splits[k].probability,
                                       std::move(splits[k].state)};
                    child.outcomes.push_back(k);
                    if (!child.state) child.probability = 0.0;
                    next.push_back(std::move(child));
                }
            }
            branches = std::move(next);
        }
    }
    return branches;
}

/// One sampled execution of a plan.
struct SampledRun {
    std::vector<int> outcomes;
    StateVector state;
};

inline SampledRun run_plan(const StateVector& s, const Plan& plan, RngStream& rng) {
    SampledRun run{{}, s};
    for (const PlanStep& step : plan) {
        if (const auto* g = std::get_if<GateStep>(&step)) {
            apply_in_place(run.state, g->op);
        } else if (const auto* cg = std::get_if<CondGateStep>(&step)) {
            if (detail::condition_holds(*cg, run.outcomes)) apply_in_place(run.state, cg->op);
        } else {
            const auto& m = std::get<MeasureStep>(step);
            auto splits = detail::split_step(run.state, m);
            const int k = detail::pick_outcome(splits, rng);
            run.outcomes.push_back(k);
            run.state = *std::move(splits[k].state);
        }
    }
    return run;
}

}  // namespace telsim
