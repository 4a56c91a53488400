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

#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"
#include "telsim/state.hpp"

using namespace telsim;
using Catch::Matchers::WithinAbs;

TEST_CASE("zero_register prepares |0...0>", "[state]") {
    const StateVector one = StateVector::zero_register(1, {5});
    REQUIRE_THAT(std::abs(one.amplitude(0) - Complex(1.0)), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(std::abs(one.amplitude(1)), WithinAbs(0.0, 1e-15));

    const StateVector three = StateVector::zero_register(3, {2, 3, 4});
    REQUIRE(three.dimension() == 8);
    REQUIRE_THAT(std::abs(three.amplitude(0) - Complex(1.0)), WithinAbs(0.0, 1e-15));
    for (std::size_t i = 1; i < 8; ++i)
        REQUIRE_THAT(std::abs(three.amplitude(i)), WithinAbs(0.0, 1e-15));
}

TEST_CASE("register construction rejects bad sizes and labels", "[state]") {
    REQUIRE_THROWS_WITH(StateVector::zero_register(11, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}),
                        Catch::Matchers::ContainsSubstring("size out of range"));
    REQUIRE_THROWS_WITH(StateVector::zero_register(0, {}),
                        Catch::Matchers::ContainsSubstring("size out of range"));
    REQUIRE_THROWS_WITH(StateVector::zero_register(2, {7, 7}),
                        Catch::Matchers::ContainsSubstring("duplicate labels"));
    REQUIRE_THROWS(StateVector::from_amplitudes({1}, {Complex(0.5), Complex(0.5)}));
}

TEST_CASE("product forms the Kronecker product with left-first positions", "[state]") {
    const Complex a0(0.8), a1(0.0, 0.6);
    const StateVector psi = StateVector::from_amplitudes({1}, {a0, a1});
    const StateVector zero = StateVector::zero_register(1, {2});

    const StateVector p = product(psi, zero);
    REQUIRE(p.labels() == std::vector<QubitLabel>{1, 2});
    REQUIRE_THAT(std::abs(p.amplitude(0) - a0), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(std::abs(p.amplitude(1)), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(std::abs(p.amplitude(2) - a1), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(std::abs(p.amplitude(3)), WithinAbs(0.0, 1e-15));
}

TEST_CASE("product of the input state and channel places amplitudes at |0000> and |0111>",
          "[state]") {
    const StateVector psi = StateVector::from_amplitudes({1}, {Complex(1.0), Complex(0.0)});
    std::vector<Complex> chan(8, Complex(0.0));
    chan[0] = 0.6;
    chan[7] = 0.8;
    const StateVector channel = StateVector::from_amplitudes({2, 3, 4}, std::move(chan));

    const StateVector whole = product(psi, channel);
    REQUIRE(whole.num_qubits() == 4);
    REQUIRE_THAT(std::abs(whole.amplitude(0b0000) - Complex(0.6)), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(std::abs(whole.amplitude(0b0111) - Complex(0.8)), WithinAbs(0.0, 1e-15));
    double rest = 0.0;
    for (std::size_t i = 0; i < 16; ++i)
        if (i != 0 && i != 7) rest += std::abs(whole.amplitude(i));
    REQUIRE_THAT(rest, WithinAbs(0.0, 1e-15));
}

TEST_CASE("product rejects overlapping labels", "[state]") {
    const StateVector a = StateVector::zero_register(2, {1, 2});
    const StateVector b = StateVector::zero_register(1, {2});
    REQUIRE_THROWS_WITH(product(a, b), Catch::Matchers::ContainsSubstring("overlapping"));
}

TEST_CASE("fidelity basics", "[state]") {
    RngStream rng(11);
    const StateVector s = test::random_state(rng, 2, {1, 2});

    SECTION("self fidelity") { REQUIRE_THAT(fidelity(s, s), WithinAbs(1.0, 1e-12)); }

    SECTION("global phase invariance") {
        std::vector<Complex> negated = s.amplitudes();
        for (Complex& a : negated) a = -a;
        const StateVector minus = StateVector::from_amplitudes(s.labels(), std::move(negated));
        REQUIRE_THAT(fidelity(s, minus), WithinAbs(1.0, 1e-12));
    }

    SECTION("orthogonal basis states") {
        const StateVector zero = StateVector::zero_register(1, {1});
        const StateVector one = StateVector::basis_state(1, {1}, 1);
        REQUIRE_THAT(fidelity(zero, one), WithinAbs(0.0, 1e-15));
    }

    SECTION("dimension mismatch is an error") {
        const StateVector one = StateVector::zero_register(1, {3});
        REQUIRE_THROWS_WITH(fidelity(s, one),
                            Catch::Matchers::ContainsSubstring("dimension mismatch"));
    }
}

TEST_CASE("fidelity is symmetric", "[state][property]") {
    RngStream rng(12);
    for (int trial = 0; trial < 25; ++trial) {
        const StateVector a = test::random_state(rng, 3, {1, 2, 3});
        const StateVector b = test::random_state(rng, 3, {1, 2, 3});
        REQUIRE(fidelity(a, b) == fidelity(b, a));
    }
}

TEST_CASE("product norm is multiplicative", "[state][property]") {
    RngStream rng(13);
    for (int trial = 0; trial < 25; ++trial) {
        const StateVector a = test::random_state(rng, 2, {1, 2});
        const StateVector b = test::random_state(rng, 2, {3, 4});
        REQUIRE_THAT(product(a, b).squared_norm(), WithinAbs(a.squared_norm() * b.squared_norm(), 1e-12));
    }
}

TEST_CASE("extract_qubit_state reads off product factors", "[state]") {
    const Complex a0(0.6, 0.3), a1 = std::sqrt(Complex(1.0) - a0 * std::conj(a0));
    const StateVector qubit = StateVector::from_amplitudes({9}, {a0, a1});

    SECTION("second factor") {
        const StateVector s = product(StateVector::zero_register(1, {1}), qubit);
        const StateVector got = extract_qubit_state(s, 9);
        REQUIRE_THAT(fidelity(got, qubit), WithinAbs(1.0, 1e-12));
    }

    SECTION("first factor next to |1>") {
        const StateVector s = product(qubit, StateVector::basis_state(1, {1}, 1));
        const StateVector got = extract_qubit_state(s, 9);
        REQUIRE_THAT(fidelity(got, qubit), WithinAbs(1.0, 1e-12));
    }

    SECTION("maximally entangled states do not factor") {
        const double r = 1.0 / std::sqrt(2.0);
        const StateVector bell = StateVector::from_amplitudes(
            {1, 2}, {Complex(r), Complex(0.0), Complex(0.0), Complex(r)});
        REQUIRE_THROWS_WITH(extract_qubit_state(bell, 1),
                            Catch::Matchers::ContainsSubstring("not a product state"));
        REQUIRE_THROWS_WITH(extract_qubit_state(bell, 2),
                            Catch::Matchers::ContainsSubstring("not a product state"));
    }
}

TEST_CASE("extract_qubit_state recovers random factors", "[state][property]") {
    RngStream rng(14);
    for (int trial = 0; trial < 30; ++trial) {
        const StateVector x = test::random_state(rng, 1, {7});
        const StateVector rest = test::random_state(rng, 3, {1, 2, 3});
        REQUIRE(fidelity(extract_qubit_state(product(x, rest), 7), x) >= 1.0 - 1e-10);
        REQUIRE(fidelity(extract_qubit_state(product(rest, x), 7), x) >= 1.0 - 1e-10);
    }
}

TEST_CASE("basis_slice strips pinned qubits", "[state]") {
    RngStream rng(15);
    const StateVector x = test::random_state(rng, 2, {5, 6});
    const StateVector marked = product(StateVector::basis_state(2, {1, 2}, 0b10), x);
    const StateVector sliced = basis_slice(marked, {{1, 1}, {2, 0}});
    REQUIRE(sliced.labels() == std::vector<QubitLabel>{5, 6});
    REQUIRE_THAT(test::max_amplitude_deviation(sliced, x), WithinAbs(0.0, 1e-12));

    REQUIRE_THROWS(basis_slice(marked, {{1, 0}, {2, 0}}));  // weight lives elsewhere
}

TEST_CASE("channel spec validation", "[state]") {
    REQUIRE_NOTHROW(ChannelSpec({0.6, 0.8}));
    REQUIRE_NOTHROW(ChannelSpec({0.5, 0.5, 0.5, 0.5}));
    REQUIRE_THROWS_WITH(ChannelSpec({0.8, 0.6}),
                        Catch::Matchers::ContainsSubstring("beta[0] must not exceed beta[1]"));
    REQUIRE_THROWS_WITH(ChannelSpec({1.0, 0.0}),
                        Catch::Matchers::ContainsSubstring("must be nonzero"));
    REQUIRE_THROWS_WITH(ChannelSpec({0.6, 0.7}),
                        Catch::Matchers::ContainsSubstring("sum of squares"));
    REQUIRE_THROWS_WITH(ChannelSpec({0.5, 0.3, 0.5, std::sqrt(1.0 - 0.59)}),
                        Catch::Matchers::ContainsSubstring("beta[0] must not exceed beta[1]"));
    REQUIRE_THROWS(ChannelSpec({1.0}));
    // Equal magnitudes are the documented degenerate deterministic case.
    const double r = 1.0 / std::sqrt(2.0);
    REQUIRE_NOTHROW(ChannelSpec({r, r}));
    REQUIRE_NOTHROW(ChannelSpec({r, -r}));
}
