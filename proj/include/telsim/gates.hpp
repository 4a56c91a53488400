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
#include <cstddef>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "telsim/common.hpp"
#include "telsim/state.hpp"

namespace telsim {

/// Unitary matrix on 1..n qubits, row-major.  Construction rejects any
/// matrix with ||U'U - I||_max above 1e-12.
class GateMatrix {
  public:
    GateMatrix(int dim, std::vector<Complex> entries)
        : dim_(dim), entries_(std::move(entries)) {
        if (dim_ < 2 || (dim_ & (dim_ - 1)) != 0) throw Error("gate dimension must be a power of 2");
        if (entries_.size() != static_cast<std::size_t>(dim_) * dim_)
            throw Error("gate entry count must be dim*dim");
        double max_dev = 0.0;
        for (int r = 0; r < dim_; ++r) {
            for (int c = 0; c < dim_; ++c) {
                Complex acc(0.0, 0.0);
                for (int k = 0; k < dim_; ++k) acc += std::conj(at(k, r)) * at(k, c);
                if (r == c) acc -= 1.0;
                max_dev = std::max(max_dev, std::abs(acc));
            }
        }
        if (max_dev > kNormTol) throw Error("matrix is not unitary");
    }

    int dim() const { return dim_; }
    int num_qubits() const {
        int n = 0;
        for (int d = dim_; d > 1; d >>= 1) ++n;
        return n;
    }
    Complex at(int row, int col) const { return entries_[static_cast<std::size_t>(row) * dim_ + col]; }
    const std::vector<Complex>& entries() const { return entries_; }

  private:
    int dim_;
    std::vector<Complex> entries_;
};

/// R_y(theta) = (cos t/2, -sin t/2; sin t/2, cos t/2).
inline GateMatrix ry(double theta) {
    if (!std::isfinite(theta)) throw Error("rotation angle must be finite");
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    return GateMatrix(2, {Complex(c), Complex(-s), Complex(s), Complex(c)});
}

/// Channel rotation R = (b0, -b1; b1, b0); R|0> = b0|0> + b1|1>.
inline GateMatrix r_channel(double beta0, double beta1) {
    if (std::abs(beta0 * beta0 + beta1 * beta1 - 1.0) > kNormTol)
        throw Error("channel rotation requires beta0^2 + beta1^2 = 1");
    return GateMatrix(2, {Complex(beta0), Complex(-beta1), Complex(beta1), Complex(beta0)});
}

namespace mat {

inline GateMatrix identity2() { return GateMatrix(2, {1, 0, 0, 1}); }
inline GateMatrix x() { return GateMatrix(2, {0, 1, 1, 0}); }
inline GateMatrix z() { return GateMatrix(2, {1, 0, 0, -1}); }
inline GateMatrix h() {
    const double r = 1.0 / std::sqrt(2.0);
    return GateMatrix(2, {Complex(r), Complex(r), Complex(r), Complex(-r)});
}
inline GateMatrix s() { return GateMatrix(2, {1, 0, 0, Complex(0, 1)}); }
inline GateMatrix t() {
    return GateMatrix(2, {1, 0, 0, std::polar(1.0, M_PI / 4.0)});
}
inline GateMatrix t_dagger() {
    return GateMatrix(2, {1, 0, 0, std::polar(1.0, -M_PI / 4.0)});
}

}  // namespace mat

/// A unitary bound to target labels, optionally conditioned on value-1
/// control labels.  `name` and `angle` feed the netlist dump.
struct GateOp {
    std::string name;
    GateMatrix matrix;
    std::vector<QubitLabel> targets;   // targets[0] is the gate's MSB
    std::vector<QubitLabel> controls;  // plain value-1 controls
    std::optional<double> angle;
};

inline GateOp pauli_x(QubitLabel t) { return {"X", mat::x(), {t}, {}, std::nullopt}; }
inline GateOp pauli_z(QubitLabel t) { return {"Z", mat::z(), {t}, {}, std::nullopt}; }
inline GateOp hadamard(QubitLabel t) { return {"H", mat::h(), {t}, {}, std::nullopt}; }
inline GateOp phase_s(QubitLabel t) { return {"S", mat::s(), {t}, {}, std::nullopt}; }
inline GateOp phase_t(QubitLabel t) { return {"T", mat::t(), {t}, {}, std::nullopt}; }
inline GateOp phase_t_dagger(QubitLabel t) { return {"Tdg", mat::t_dagger(), {t}, {}, std::nullopt}; }
inline GateOp ry_gate(double theta, QubitLabel t) { return {"RY", ry(theta), {t}, {}, theta}; }
inline GateOp cnot(QubitLabel control, QubitLabel target) {
    return {"CNOT", mat::x(), {target}, {control}, std::nullopt};
}
inline GateOp cz(QubitLabel control, QubitLabel target) {
    return {"CZ", mat::z(), {target}, {control}, std::nullopt};
}
inline GateOp channel_rotation(double beta0, double beta1, QubitLabel t) {
    return {"R", r_channel(beta0, beta1), {t}, {}, 2.0 * std::atan2(beta1, beta0)};
}

/// Adds a value-1 control to an existing gate.
inline GateOp controlled(GateOp op, QubitLabel control) {
    op.controls.push_back(control);
    if (op.name == "X" && op.controls.size() == 1) op.name = "CNOT";
    else if (op.name == "Z" && op.controls.size() == 1) op.name = "CZ";
    else op.name = "C" + op.name;
    return op;
}

/// Applies the controlled embedding of op.matrix in place.  Amplitudes whose
/// control bits are not all 1 are left untouched (exactly).
inline void apply_in_place(StateVector& s, const GateOp& op) {
    const int k = static_cast<int>(op.targets.size());
    if (op.matrix.num_qubits() != k) throw Error("gate matrix size does not match target count");
    for (QubitLabel c : op.controls)
        for (QubitLabel t : op.targets)
            if (c == t) throw Error("gate controls and targets must be disjoint");

    std::size_t target_mask = 0, control_mask = 0;
    std::vector<std::size_t> tbit(k);
    for (int j = 0; j < k; ++j) {
        tbit[j] = s.position_mask(s.position_of(op.targets[j]));
        target_mask |= tbit[j];
    }
    for (QubitLabel c : op.controls) control_mask |= s.position_mask(s.position_of(c));

    const std::size_t sub_dim = std::size_t{1} << k;
    std::vector<Complex> scratch(sub_dim);
    auto& amps = s.mutable_amplitudes();
    for (std::size_t base = 0; base < s.dimension(); ++base) {
        if (base & target_mask) continue;
        if ((base & control_mask) != control_mask) continue;
        for (std::size_t j = 0; j < sub_dim; ++j) {
            std::size_t idx = base;
            for (int b = 0; b < k; ++b)
                if ((j >> (k - 1 - b)) & 1u) idx |= tbit[b];
            scratch[j] = amps[idx];
        }
        for (std::size_t r = 0; r < sub_dim; ++r) {
            Complex acc(0.0, 0.0);
            for (std::size_t c = 0; c < sub_dim; ++c)
                acc += op.matrix.at(static_cast<int>(r), static_cast<int>(c)) * scratch[c];
            std::size_t idx = base;
            for (int b = 0; b < k; ++b)
                if ((r >> (k - 1 - b)) & 1u) idx |= tbit[b];
            amps[idx] = acc;
        }
    }
}

inline StateVector apply(const StateVector& s, const GateOp& op) {
    StateVector out = s;
    apply_in_place(out, op);
    return out;
}

/// Full 2^n x 2^n matrix of a gate sequence over the given register labels.
/// The first element of `ops` is applied first (the rightmost factor of an
/// operator product).
inline GateMatrix compose(const std::vector<GateOp>& ops, const std::vector<QubitLabel>& labels) {
    if (ops.empty()) throw Error("cannot compose an empty gate sequence");
    const int n = static_cast<int>(labels.size());
    const std::size_t dim = std::size_t{1} << n;
    std::vector<Complex> entries(dim * dim);
    for (std::size_t col = 0; col < dim; ++col) {
        StateVector v = StateVector::basis_state(n, labels, col);
        for (const GateOp& op : ops) apply_in_place(v, op);
        for (std::size_t row = 0; row < dim; ++row) entries[row * dim + col] = v.amplitude(row);
    }
    return GateMatrix(static_cast<int>(dim), std::move(entries));
}

/// Single-control multiplexed R_y: rotates the target by angle0 when the
/// control reads 0 and by angle1 when it reads 1, using CNOTs and plain
/// rotations only.
inline std::vector<GateOp> multiplexed_ry(QubitLabel control, QubitLabel target,
                                          double angle0, double angle1) {
    const double half_sum = (angle0 + angle1) / 2.0;
    const double half_diff = (angle0 - angle1) / 2.0;
    return {ry_gate(half_sum, target), cnot(control, target), ry_gate(half_diff, target),
            cnot(control, target)};
}

/// One netlist line per gate: `GATE name target [control] [angle]`.
inline std::string netlist_line(const GateOp& op) {
    std::string line = "GATE " + op.name;
    for (QubitLabel t : op.targets) line += " " + std::to_string(t);
    for (QubitLabel c : op.controls) line += " " + std::to_string(c);
    if (op.angle) {
        char buf[48];
        std::snprintf(buf, sizeof buf, " %.17g", *op.angle);
        line += buf;
    }
    return line;
}

}  // namespace telsim
