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

// Shared test helpers: seeded random states and channel specs, plus small
// comparison utilities.  These stay independent of the code paths they
// exercise (plain formulas only).

#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "telsim/measure.hpp"
#include "telsim/state.hpp"

namespace telsim::test {

inline double gaussian(RngStream& rng) {
    // Box-Muller; the log argument is kept away from zero.
    const double u = 1.0 - rng.next_double();
    const double v = rng.next_double();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

template <std::size_t N>
std::array<Complex, N> random_alpha(RngStream& rng) {
    std::array<Complex, N> alpha;
    double norm = 0.0;
    for (auto& a : alpha) {
        a = Complex(gaussian(rng), gaussian(rng));
        norm += std::norm(a);
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& a : alpha) a *= scale;
    return alpha;
}

/// Random valid channel spec: nonzero entries, unit squared sum, |beta[0]|
/// minimal.  Signs beyond beta[0] flip occasionally when allowed.
inline ChannelSpec random_spec(RngStream& rng, std::size_t n, bool allow_negative = false) {
    std::vector<double> betas(n);
    while (true) {
        double norm = 0.0;
        for (double& b : betas) {
            b = 0.05 + 0.95 * rng.next_double();
            norm += b * b;
        }
        const double scale = 1.0 / std::sqrt(norm);
        for (double& b : betas) b *= scale;
        std::size_t smallest = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(betas[i]) < std::abs(betas[smallest])) smallest = i;
        std::swap(betas[0], betas[smallest]);
        if (allow_negative)
            for (std::size_t i = 1; i < n; ++i)
                if (rng.next_double() < 0.3) betas[i] = -betas[i];
        double check = 0.0;
        for (double b : betas) check += b * b;
        if (std::abs(check - 1.0) <= 1e-13) return ChannelSpec(betas);
    }
}

inline StateVector random_state(RngStream& rng, int num_qubits, std::vector<QubitLabel> labels) {
    std::vector<Complex> amps(std::size_t{1} << num_qubits);
    double norm = 0.0;
    for (auto& a : amps) {
        a = Complex(gaussian(rng), gaussian(rng));
        norm += std::norm(a);
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& a : amps) a *= scale;
    return StateVector::from_amplitudes(std::move(labels), std::move(amps));
}

inline double max_amplitude_deviation(const StateVector& a, const StateVector& b) {
    double dev = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i)
        dev = std::max(dev, std::abs(a.amplitude(i) - b.amplitude(i)));
    return dev;
}

}  // namespace telsim::test
