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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "telsim/channels.hpp"
#include "telsim/common.hpp"
#include "telsim/gates.hpp"
#include "telsim/measure.hpp"
#include "telsim/state.hpp"
#include "telsim/unitaries.hpp"

namespace telsim {

/// Per-qubit correction letters.  ZX denotes the matrix product Z*X, i.e.
/// X applied first and Z second.
enum class Pauli { I, X, Z, ZX };

using PauliWord = std::vector<Pauli>;

inline const char* pauli_name(Pauli p) {
    switch (p) {
        case Pauli::I: return "I";
        case Pauli::X: return "X";
        case Pauli::Z: return "Z";
        case Pauli::ZX: return "ZX";
    }
    return "?";
}

inline std::string pauli_word_name(const PauliWord& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ".";
        out += pauli_name(w[i]);
    }
    return out;
}

/// Applies one correction letter to a qubit (X before Z for the ZX letter).
inline void apply_pauli_in_place(StateVector& s, Pauli p, QubitLabel target) {
    switch (p) {
        case Pauli::I: return;
        case Pauli::X: apply_in_place(s, pauli_x(target)); return;
        case Pauli::Z: apply_in_place(s, pauli_z(target)); return;
        case Pauli::ZX:
            apply_in_place(s, pauli_x(target));
            apply_in_place(s, pauli_z(target));
            return;
    }
}

inline void apply_pauli_word_in_place(StateVector& s, const PauliWord& word,
                                      const std::vector<QubitLabel>& targets) {
    if (word.size() != targets.size()) throw Error("pauli word length must match target count");
    for (std::size_t i = 0; i < word.size(); ++i) apply_pauli_in_place(s, word[i], targets[i]);
}

/// Exhaustive search over {I,X,Z,ZX}^n for a word mapping `branch_state`
/// onto `target_state` up to global phase.  Ties break toward the
/// lexicographically smallest word (I < X < Z < ZX per qubit); errors if no
/// word reaches fidelity 1 - 1e-10.
inline PauliWord derive_correction(const StateVector& branch_state,
                                   const StateVector& target_state, int paulis_per_qubit) {
    if (branch_state.num_qubits() != target_state.num_qubits())
        throw Error("dimension mismatch in derive_correction");
    if (paulis_per_qubit != branch_state.num_qubits())
        throw Error("derive_correction expects one pauli slot per qubit");

    const int n = paulis_per_qubit;
    const int words = 1 << (2 * n);
    for (int code = 0; code < words; ++code) {
        PauliWord word(n);
        for (int q = 0; q < n; ++q)
            word[q] = static_cast<Pauli>((code >> (2 * (n - 1 - q))) & 3);
        StateVector candidate = branch_state;
        apply_pauli_word_in_place(candidate, word, branch_state.labels());
        if (fidelity(candidate, target_state) >= 1.0 - kFactorTol) return word;
    }
    throw Error("no exact correction");
}

/// Per-run protocol outcome.  `outcomes` holds the measurement codes in
/// protocol order ((bell, charlie, aux) for one particle; (bell23, bell14,
/// charlie, aux) for two).  `probability` is filled by exact enumeration
/// only.
struct ProtocolResult {
    bool success = false;
    std::vector<int> outcomes;
    std::optional<PauliWord> correction;
    std::optional<StateVector> recovered;
    std::optional<double> fidelity;
    std::optional<double> probability;
};

namespace detail {

inline void require_normalized_alpha(double squared_sum) {
    if (std::abs(squared_sum - 1.0) > kNormTol)
        throw Error("alpha amplitudes must be normalized");
}

}  // namespace detail

/// Correction Bob applies to particle 3, indexed by Alice's Bell outcome and
/// Charlie's bit.  The table was machine-derived from the enumerated
/// aux-0 branch states (see the regression test) and frozen; it satisfies
/// correction = Z^(phase xor charlie) * X^(parity).
inline PauliWord correction_one(int bell, int charlie) {
    if (bell < 0 || bell > 3 || charlie < 0 || charlie > 1)
        throw Error("correction_one outcome code out of range");
    static constexpr Pauli kTable[8] = {
        Pauli::I,  Pauli::Z,   // Phi+, charlie 0/1
        Pauli::Z,  Pauli::I,   // Phi-
        Pauli::X,  Pauli::ZX,  // Psi+
        Pauli::ZX, Pauli::X,   // Psi-
    };
    return {kTable[2 * bell + charlie]};
}

/// Analytic success probability 2*b0^2; equals the enumerated aux=0 mass
/// for every normalized input state.
inline double success_probability_one(const ChannelSpec& spec) {
    detail::require_spec_size(spec, 2, "one-particle protocol");
    return 2.0 * spec.beta(0) * spec.beta(0);
}

/// Initial register: unknown state on particle 1, channel on (2,3,4),
/// aux |0> on 5.
inline StateVector one_particle_initial(const std::array<Complex, 2>& alpha,
                                        const ChannelSpec& spec) {
    detail::require_normalized_alpha(std::norm(alpha[0]) + std::norm(alpha[1]));
    const StateVector psi = StateVector::from_amplitudes({1}, {alpha[0], alpha[1]});
    return product(product(psi, channel_one(spec)), StateVector::zero_register(1, {5}));
}

/// Measure-then-feed-forward plan (measurements: bell, charlie, aux).
/// Corrections ride along as classically conditioned gates when requested;
/// failed (aux=1) branches keep whatever state they collapsed to, which the
/// protocol discards.
inline Plan one_particle_plan(const ChannelSpec& spec, bool with_corrections) {
    Plan plan{
        MeasureStep{MeasureBasis::Bell, 1, 2},
        GateStep{hadamard(4)},
        MeasureStep{MeasureBasis::Z, 4},
        GateStep{u1_op(spec)},
        MeasureStep{MeasureBasis::Z, 5},
    };
    if (with_corrections) {
        plan.push_back(CondGateStep{pauli_x(3), 0, {2, 3}});  // Bell parity
        plan.push_back(CondGateStep{pauli_z(3), 0, {1, 3}});  // Bell phase
        plan.push_back(CondGateStep{pauli_z(3), 1, {1}});     // Charlie
    }
    return plan;
}

/// Coherent restatement: every measurement commutes to the end, with the
/// feed-forward replaced by controlled gates.  Measurement order is
/// (1, 2, 4, 5); the Bell code is 2*m2 + m1.
inline Plan one_particle_coherent_plan(const ChannelSpec& spec) {
    return Plan{
        GateStep{cnot(1, 2)},
        GateStep{hadamard(1)},
        GateStep{hadamard(4)},
        GateStep{u1_op(spec)},
        GateStep{cnot(2, 3)},
        GateStep{cz(1, 3)},
        GateStep{cz(4, 3)},
        MeasureStep{MeasureBasis::Z, 1},
        MeasureStep{MeasureBasis::Z, 2},
        MeasureStep{MeasureBasis::Z, 4},
        MeasureStep{MeasureBasis::Z, 5},
    };
}

/// One sampled run of the one-particle protocol.  On aux=0 the correction
/// is applied and the recovered qubit-3 state is compared to the input.
inline ProtocolResult teleport_one(const std::array<Complex, 2>& alpha, const ChannelSpec& spec,
                                   RngStream& rng) {
    const StateVector initial = one_particle_initial(alpha, spec);
    SampledRun run = run_plan(initial, one_particle_plan(spec, false), rng);
    const int bell = run.outcomes[0], charlie = run.outcomes[1], aux = run.outcomes[2];

    ProtocolResult result;
    result.outcomes = {bell, charlie, aux};
    result.success = aux == 0;
    if (!result.success) return result;

    const PauliWord word = correction_one(bell, charlie);
    apply_pauli_word_in_place(run.state, word, {3});
    result.correction = word;
    result.recovered = extract_qubit_state(run.state, 3);
    result.fidelity =
        fidelity(*result.recovered, StateVector::from_amplitudes({1}, {alpha[0], alpha[1]}));
    return result;
}

/// Exact per-branch analytics: 16 records over (bell, charlie, aux) with
/// joint probabilities and, on successful branches, the post-correction
/// fidelity against the input state.
inline std::vector<ProtocolResult> exact_branches_one(const std::array<Complex, 2>& alpha,
                                                      const ChannelSpec& spec) {
    const StateVector initial = one_particle_initial(alpha, spec);
    const StateVector target = StateVector::from_amplitudes({1}, {alpha[0], alpha[1]});
    auto branches = enumerate_branches(initial, one_particle_plan(spec, true));

    std::vector<ProtocolResult> out;
    out.reserve(branches.size());
    for (const BranchRecord& b : branches) {
        ProtocolResult r;
        r.outcomes = b.outcomes;
        r.probability = b.probability;
        r.success = b.outcomes[2] == 0;
        if (r.success) r.correction = correction_one(b.outcomes[0], b.outcomes[1]);
        if (r.success && b.state) {
            r.recovered = extract_qubit_state(*b.state, 3);
            r.fidelity = fidelity(*r.recovered, target);
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace telsim
