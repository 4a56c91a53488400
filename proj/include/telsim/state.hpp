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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "telsim/common.hpp"

namespace telsim {

/// Dense complex amplitude vector over an ordered qubit register.
///
/// Register position 0 is the most significant bit of the basis index, so a
/// register with labels (1,2,3) stores the amplitude of |q1 q2 q3> at index
/// q1*4 + q2*2 + q3.  Printed kets therefore read in particle-label order.
/// Values are immutable after construction except through the mutating
/// helpers used by gate application, which keep the norm within 1e-12.
class StateVector {
  public:
    /// |0...0> on the given labels.
    static StateVector zero_register(int num_qubits, std::vector<QubitLabel> labels) {
        return basis_state(num_qubits, std::move(labels), 0);
    }

    /// Computational basis state |index> on the given labels.
    static StateVector basis_state(int num_qubits, std::vector<QubitLabel> labels,
                                   std::size_t index) {
        StateVector s(num_qubits, std::move(labels));
        if (index >= s.dimension()) throw Error("basis index out of range");
        s.amps_[index] = Complex(1.0, 0.0);
        return s;
    }

    /// Builds a state from explicit amplitudes; the squared norm must be 1
    /// within 1e-12.
    static StateVector from_amplitudes(std::vector<QubitLabel> labels,
                                       std::vector<Complex> amplitudes) {
        const int n = static_cast<int>(labels.size());
        StateVector s(n, std::move(labels));
        if (amplitudes.size() != s.dimension())
            throw Error("amplitude count must be 2^num_qubits");
        s.amps_ = std::move(amplitudes);
        if (std::abs(s.squared_norm() - 1.0) > kNormTol)
            throw Error("state is not normalized");
        return s;
    }

    int num_qubits() const { return num_qubits_; }
    std::size_t dimension() const { return amps_.size(); }
    const std::vector<QubitLabel>& labels() const { return labels_; }
    const std::vector<Complex>& amplitudes() const { return amps_; }
    Complex amplitude(std::size_t index) const { return amps_.at(index); }

    /// Register position of a particle label.
    int position_of(QubitLabel label) const {
        for (std::size_t p = 0; p < labels_.size(); ++p)
            if (labels_[p] == label) return static_cast<int>(p);
        throw Error("unknown qubit label " + std::to_string(label));
    }

    bool has_label(QubitLabel label) const {
        return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
    }

    /// Bit value of basis index at a register position (position 0 = MSB).
    int bit_at(std::size_t index, int position) const {
        return static_cast<int>((index >> (num_qubits_ - 1 - position)) & 1u);
    }

    /// Basis-index mask selecting a register position.
    std::size_t position_mask(int position) const {
        return std::size_t{1} << (num_qubits_ - 1 - position);
    }

    double squared_norm() const {
        double s = 0.0;
        for (const Complex& a : amps_) s += std::norm(a);
        return s;
    }

    std::vector<Complex>& mutable_amplitudes() { return amps_; }

  private:
    StateVector(int num_qubits, std::vector<QubitLabel> labels)
        : num_qubits_(num_qubits), labels_(std::move(labels)),
          amps_(std::size_t{1} << check_size(num_qubits), Complex(0.0, 0.0)) {
        if (static_cast<int>(labels_.size()) != num_qubits_)
            throw Error("label count must equal num_qubits");
        for (std::size_t i = 0; i < labels_.size(); ++i)
            for (std::size_t j = i + 1; j < labels_.size(); ++j)
                if (labels_[i] == labels_[j]) throw Error("duplicate labels");
    }

    static int check_size(int num_qubits) {
        if (num_qubits < 1 || num_qubits > 10) throw Error("size out of range (1..10 qubits)");
        return num_qubits;
    }

    int num_qubits_;
    std::vector<QubitLabel> labels_;
    std::vector<Complex> amps_;
};

/// Kronecker product; a's register positions precede b's.  Labels must be
/// disjoint.
inline StateVector product(const StateVector& a, const StateVector& b) {
    for (QubitLabel l : b.labels())
        if (a.has_label(l)) throw Error("overlapping labels in product");
    std::vector<QubitLabel> labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());

    std::vector<Complex> amps(a.dimension() * b.dimension());
    for (std::size_t ia = 0; ia < a.dimension(); ++ia)
        for (std::size_t ib = 0; ib < b.dimension(); ++ib)
            amps[ia * b.dimension() + ib] = a.amplitude(ia) * b.amplitude(ib);
    return StateVector::from_amplitudes(std::move(labels), std::move(amps));
}

/// |<a|b>|^2, comparing amplitudes position-wise.  Insensitive to global
/// phase by construction.
inline double fidelity(const StateVector& a, const StateVector& b) {
    if (a.num_qubits() != b.num_qubits()) throw Error("dimension mismatch in fidelity");
    Complex overlap(0.0, 0.0);
    for (std::size_t i = 0; i < a.dimension(); ++i)
        overlap += std::conj(a.amplitude(i)) * b.amplitude(i);
    return std::norm(overlap);
}

/// Extracts the normalized 1-qubit factor of the addressed qubit.  The state
/// must factor as (qubit) x (rest) within 1e-10, which holds once every other
/// qubit has been measured.
inline StateVector extract_qubit_state(const StateVector& s, QubitLabel label) {
    const int p = s.position_of(label);
    const std::size_t mask = s.position_mask(p);
    const std::size_t rest_dim = s.dimension() / 2;

    // M[b][r]: amplitude with the addressed qubit in |b> and the remaining
    // register bits packed into r.
    std::vector<Complex> m0(rest_dim), m1(rest_dim);
    const std::size_t low = mask - 1;  // bits below the addressed position
    for (std::size_t r = 0; r < rest_dim; ++r) {
        const std::size_t idx = ((r & ~low) << 1) | (r & low);
        m0[r] = s.amplitude(idx);
        m1[r] = s.amplitude(idx | mask);
    }

    // Column with the largest mass fixes the factor (and its phase).
    std::size_t best = 0;
    double best_mass = -1.0;
    for (std::size_t r = 0; r < rest_dim; ++r) {
        const double mass = std::norm(m0[r]) + std::norm(m1[r]);
        if (mass > best_mass) {
            best_mass = mass;
            best = r;
        }
    }
    Complex u0 = m0[best], u1 = m1[best];
    const double unorm = std::sqrt(std::norm(u0) + std::norm(u1));
    if (unorm <= 0.0) throw Error("not a product state");
    u0 /= unorm;
    u1 /= unorm;

    // Rank-1 residual check: M must equal u v^T.
    double residual = 0.0;
    for (std::size_t r = 0; r < rest_dim; ++r) {
        const Complex v = std::conj(u0) * m0[r] + std::conj(u1) * m1[r];
        residual += std::norm(m0[r] - u0 * v) + std::norm(m1[r] - u1 * v);
    }
    if (std::sqrt(residual) > kFactorTol) throw Error("not a product state");

    return StateVector::from_amplitudes({label}, {u0, u1});
}

/// Amplitudes of the remaining qubits once the given labels are pinned to
/// basis values.  Errors if the state carries weight outside that slice.
inline StateVector basis_slice(const StateVector& s,
                               const std::vector<std::pair<QubitLabel, int>>& fixed) {
    std::size_t fixed_mask = 0, fixed_bits = 0;
    for (const auto& [label, value] : fixed) {
        const std::size_t m = s.position_mask(s.position_of(label));
        fixed_mask |= m;
        if (value) fixed_bits |= m;
    }
    std::vector<QubitLabel> labels;
    std::vector<int> kept_positions;
    for (int p = 0; p < s.num_qubits(); ++p) {
        if ((s.position_mask(p) & fixed_mask) == 0) {
            labels.push_back(s.labels()[p]);
            kept_positions.push_back(p);
        }
    }
    if (labels.empty()) throw Error("basis_slice would leave an empty register");

    const int k = static_cast<int>(labels.size());
    std::vector<Complex> amps(std::size_t{1} << k, Complex(0.0, 0.0));
    double off_slice = 0.0;
    for (std::size_t idx = 0; idx < s.dimension(); ++idx) {
        if ((idx & fixed_mask) != fixed_bits) {
            off_slice += std::norm(s.amplitude(idx));
            continue;
        }
        std::size_t packed = 0;
        for (int j = 0; j < k; ++j)
            packed |= static_cast<std::size_t>(s.bit_at(idx, kept_positions[j])) << (k - 1 - j);
        amps[packed] = s.amplitude(idx);
    }
    if (std::sqrt(off_slice) > kFactorTol)
        throw Error("state carries weight outside the requested basis slice");
    return StateVector::from_amplitudes(std::move(labels), std::move(amps));
}

/// The beta coefficients defining a non-maximally-entangled channel
/// (2 entries for the one-particle protocol, 4 for the two-particle one).
/// All entries are nonzero reals, the squared sum is 1 within 1e-12, and
/// |beta[0]| does not exceed any other |beta[i]|; equality is the documented
/// degenerate deterministic case.
class ChannelSpec {
  public:
    explicit ChannelSpec(std::vector<double> betas) : betas_(std::move(betas)) {
        if (betas_.size() != 2 && betas_.size() != 4)
            throw Error("channel spec requires 2 or 4 beta values");
        double sq = 0.0;
        for (std::size_t i = 0; i < betas_.size(); ++i) {
            if (betas_[i] == 0.0)
                throw Error("beta[" + std::to_string(i) + "] must be nonzero");
            sq += betas_[i] * betas_[i];
        }
        if (std::abs(sq - 1.0) > kNormTol)
            throw Error("beta values must satisfy sum of squares = 1");
        for (std::size_t i = 1; i < betas_.size(); ++i)
            if (std::abs(betas_[0]) > std::abs(betas_[i]))
                throw Error("beta[0] must not exceed beta[" + std::to_string(i) + "]");
    }

    const std::vector<double>& betas() const { return betas_; }
    double beta(std::size_t i) const { return betas_.at(i); }
    std::size_t size() const { return betas_.size(); }

  private:
    std::vector<double> betas_;
};

}  // namespace telsim
