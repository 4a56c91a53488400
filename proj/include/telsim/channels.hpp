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
#include <vector>

#include "telsim/common.hpp"
#include "telsim/gates.hpp"
#include "telsim/state.hpp"

namespace telsim {

namespace detail {

inline void require_spec_size(const ChannelSpec& spec, std::size_t n, const char* what) {
    if (spec.size() != n) throw Error(std::string(what) + " requires a " +
                                      std::to_string(n) + "-entry channel spec");
}

}  // namespace detail

/// Three-qubit channel b0|000> + b1|111> on labels (2,3,4).
inline StateVector channel_one(const ChannelSpec& spec) {
    detail::require_spec_size(spec, 2, "one-particle channel");
    std::vector<Complex> amps(8, Complex(0.0));
    amps[0] = spec.beta(0);
    amps[7] = spec.beta(1);
    return StateVector::from_amplitudes({2, 3, 4}, std::move(amps));
}

/// Circuit preparing channel_one from |000>: rotate qubit 2, then fan out.
inline std::vector<GateOp> channel_one_circuit(const ChannelSpec& spec) {
    detail::require_spec_size(spec, 2, "one-particle channel");
    return {channel_rotation(spec.beta(0), spec.beta(1), 2), cnot(2, 3), cnot(2, 4)};
}

/// Five-qubit channel b0|00000> + b1|01100> + b2|10011> + b3|11111> on
/// labels (3,4,5,6,7).
inline StateVector channel_two(const ChannelSpec& spec) {
    detail::require_spec_size(spec, 4, "two-particle channel");
    std::vector<Complex> amps(32, Complex(0.0));
    amps[0b00000] = spec.beta(0);
    amps[0b01100] = spec.beta(1);
    amps[0b10011] = spec.beta(2);
    amps[0b11111] = spec.beta(3);
    return StateVector::from_amplitudes({3, 4, 5, 6, 7}, std::move(amps));
}

/// Circuit preparing channel_two from |00000>.
///
/// Amplitude tree: a rotation on qubit 3 splits the (b0,b1) / (b2,b3) mass,
/// a multiplexed rotation on qubit 4 (controlled by 3) fixes the leaves, and
/// CNOT fan-out copies the bit relations q5=q4, q6=q3, q7=q3.  All angles
/// are taken with nonnegative sine so positive betas yield nonnegative
/// amplitudes; negative betas enter through signed cosine ratios.
inline std::vector<GateOp> channel_two_circuit(const ChannelSpec& spec) {
    detail::require_spec_size(spec, 4, "two-particle channel");
    const double s01 = std::hypot(spec.beta(0), spec.beta(1));
    const double s23 = std::hypot(spec.beta(2), spec.beta(3));
    const double top = 2.0 * std::atan2(s23, s01);
    const double branch0 = 2.0 * std::atan2(spec.beta(1), spec.beta(0));
    const double branch1 = 2.0 * std::atan2(spec.beta(3), spec.beta(2));

    std::vector<GateOp> ops{ry_gate(top, 3)};
    for (GateOp& g : multiplexed_ry(3, 4, branch0, branch1)) ops.push_back(std::move(g));
    ops.push_back(cnot(4, 5));
    ops.push_back(cnot(3, 6));
    ops.push_back(cnot(3, 7));
    return ops;
}

}  // namespace telsim
