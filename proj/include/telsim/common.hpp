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

#include <complex>
#include <stdexcept>
#include <string>

namespace telsim {

using Complex = std::complex<double>;

/// Particle label attached to a register position (the protocols use 1..8).
using QubitLabel = int;

/// Tolerance for normalization / unitarity checks.
inline constexpr double kNormTol = 1e-12;

/// Tolerance for product-state factorization (composes many operations).
inline constexpr double kFactorTol = 1e-10;

/// Measurement probabilities must sum to 1 within this bound; a larger
/// deviation signals upstream state corruption.
inline constexpr double kProbabilitySumTol = 1e-9;

/// Branches below this joint probability carry no renormalizable state.
inline constexpr double kVanishedBranchTol = 1e-24;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace telsim
