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
#include <limits>
#include <string>
#include <vector>

#include "telsim/channels.hpp"
#include "telsim/common.hpp"
#include "telsim/gates.hpp"
#include "telsim/state.hpp"

namespace telsim {

namespace detail {

// cos(theta/2) = beta0/betai with the sine branch taken nonnegative.
inline double recovery_angle(double beta0, double betai) {
    const double ratio = beta0 / betai;
    const double rad = std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
    return 2.0 * std::atan2(rad, ratio);
}

}  // namespace detail

/// Bob's collective recovery unitary for the one-particle protocol, on the
/// ordered basis {|00>,|01>,|10>,|11>} of (particle 3, aux 5):
///
///   [1   0   0  0]
///   [0   r   w  0]      r = b0/b1,  w = sqrt(1 - r^2)
///   [0  -w   r  0]
///   [0   0   0  1]
inline GateMatrix u1_matrix(const ChannelSpec& spec) {
    detail::require_spec_size(spec, 2, "u1");
    const double r = spec.beta(0) / spec.beta(1);
    const double w = std::sqrt(std::max(0.0, 1.0 - r * r));
    return GateMatrix(4, {1, 0, 0, 0,
                          0, r, w, 0,
                          0, -w, r, 0,
                          0, 0, 0, 1});
}

/// CNOT + R_y factorization of u1_matrix, in execution order on (3,5).
inline std::vector<GateOp> u1_circuit(const ChannelSpec& spec) {
    detail::require_spec_size(spec, 2, "u1");
    const double theta = detail::recovery_angle(spec.beta(0), spec.beta(1));
    return {cnot(5, 3), ry_gate(theta / 2.0, 5),  cnot(3, 5),
            ry_gate(-theta / 2.0, 5), cnot(3, 5), cnot(5, 3)};
}

/// u1_matrix bound to its protocol wires (particle 3, aux 5).
inline GateOp u1_op(const ChannelSpec& spec) {
    return GateOp{"U1", u1_matrix(spec), {3, 5}, {}, std::nullopt};
}

/// Bob's recovery unitary for the two-particle protocol on the ordered basis
/// {|000>..|111>} of (5,6,8) with qubit 8 least significant: block diagonal
/// with the identity on the (q5,q6)=(0,0) sector and
///
///   u_i = [b0/bi, -sqrt(1-b0^2/bi^2); sqrt(1-b0^2/bi^2), b0/bi]
///
/// acting on the aux qubit in sectors (0,1) -> u2, (1,0) -> u1, (1,1) -> u3.
inline GateMatrix u2_matrix(const ChannelSpec& spec) {
    detail::require_spec_size(spec, 4, "u2");
    std::vector<Complex> e(64, Complex(0.0));
    e[0 * 8 + 0] = 1.0;
    e[1 * 8 + 1] = 1.0;
    const int sector_block[3] = {2, 1, 3};  // sectors (01),(10),(11) use u2,u1,u3
    for (int sector = 1; sector < 4; ++sector) {
        const double r = spec.beta(0) / spec.beta(sector_block[sector - 1]);
        const double w = std::sqrt(std::max(0.0, 1.0 - r * r));
        const int row = sector * 2;
        e[row * 8 + row] = r;
        e[row * 8 + row + 1] = -w;
        e[(row + 1) * 8 + row] = w;
        e[(row + 1) * 8 + row + 1] = r;
    }
    return GateMatrix(8, std::move(e));
}

/// u2_matrix as a uniformly controlled R_y on qubit 8 (controls 5,6),
/// expanded into CNOTs and single-qubit rotations only.  The effective
/// angle per control sector is (0, theta2, theta1, theta3) with
/// cos(theta_i/2) = b0/bi.
inline std::vector<GateOp> u2_circuit(const ChannelSpec& spec) {
    detail::require_spec_size(spec, 4, "u2");
    const double th1 = detail::recovery_angle(spec.beta(0), spec.beta(1));
    const double th2 = detail::recovery_angle(spec.beta(0), spec.beta(2));
    const double th3 = detail::recovery_angle(spec.beta(0), spec.beta(3));
    // Sector angles s00=0, s01=th2, s10=th1, s11=th3 solved against the
    // sign pattern the alternating CNOTs impose on the four rotations.
    const double t1 = (th1 + th2 + th3) / 4.0;
    const double t2 = (th1 - th2 - th3) / 4.0;
    const double t3 = (-th1 - th2 + th3) / 4.0;
    const double t4 = (-th1 + th2 - th3) / 4.0;
    return {ry_gate(t1, 8), cnot(6, 8), ry_gate(t2, 8), cnot(5, 8),
            ry_gate(t3, 8), cnot(6, 8), ry_gate(t4, 8), cnot(5, 8)};
}

/// u2_matrix bound to its protocol wires (5, 6, aux 8).
inline GateOp u2_op(const ChannelSpec& spec) {
    return GateOp{"U2", u2_matrix(spec), {5, 6, 8}, {}, std::nullopt};
}

/// Result of a global-phase-insensitive matrix comparison.
struct EquivalenceReport {
    bool equivalent = false;
    double max_deviation = 0.0;
    double phase = 0.0;  // optimal e^{i*phase} alignment of b onto a
};

/// True iff min over global phase of ||a - e^{i phi} b||_max <= tol.
/// Candidate phases come from entrywise alignments and the trace of b'a,
/// which is exact whenever the two matrices really are phase-equivalent.
inline EquivalenceReport assert_equivalent(const GateMatrix& a, const GateMatrix& b, double tol) {
    if (a.dim() != b.dim()) throw Error("dimension mismatch in equivalence check");
    const int dim = a.dim();

    std::vector<double> candidates{0.0};
    Complex trace(0.0, 0.0);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) trace += std::conj(b.at(r, c)) * a.at(r, c);
    if (std::abs(trace) > 1e-9) candidates.push_back(std::arg(trace));
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            if (std::abs(b.at(r, c)) > 1e-9 && std::abs(a.at(r, c)) > 1e-9)
                candidates.push_back(std::arg(a.at(r, c) / b.at(r, c)));

    EquivalenceReport best;
    best.max_deviation = std::numeric_limits<double>::infinity();
    for (double phi : candidates) {
        const Complex scale = std::polar(1.0, phi);
        double dev = 0.0;
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c)
                dev = std::max(dev, std::abs(a.at(r, c) - scale * b.at(r, c)));
        if (dev < best.max_deviation) {
            best.max_deviation = dev;
            best.phase = phi;
        }
    }
    best.equivalent = best.max_deviation <= tol;
    return best;
}

/// Netlist dump: one `GATE ...` line per element.
inline std::string netlist(const std::vector<GateOp>& ops) {
    std::string out;
    for (const GateOp& op : ops) out += netlist_line(op) + "\n";
    return out;
}

/// Structural check used by the synthesis contract: every element is either
/// a CNOT or an uncontrolled single-qubit gate.
inline bool only_cnot_and_single_qubit(const std::vector<GateOp>& ops) {
    for (const GateOp& op : ops) {
        const bool is_cnot = op.targets.size() == 1 && op.controls.size() == 1 &&
                             op.name == "CNOT";
        const bool is_single = op.targets.size() == 1 && op.controls.empty();
        if (!is_cnot && !is_single) return false;
    }
    return true;
}

}  // namespace telsim
