// Copyright 2026 The dickevqe Authors
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

#include "dickevqe/ansatz.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dickevqe/basis.hpp"
#include "dickevqe/qsim.hpp"
#include "support.hpp"
#include "u4_reference.hpp"

namespace dickevqe {
namespace {

constexpr double kPi = std::numbers::pi;

using testing::bare_u4;
using testing::Matrix16;
using testing::reference_u4;

/// Column-by-column assembly through the simulator.
Matrix16 assemble(const Circuit &c, const std::vector<double> &theta) {
    Matrix16 m{};
    for (uint64_t col = 0; col < 16; col++) {
        StateVector s = init_basis(4, BasisState(4, col));
        apply_circuit(s, c, theta);
        for (uint64_t row = 0; row < 16; row++) {
            EXPECT_NEAR(s.amplitude(row).imag(), 0.0, 1e-15);
            m[row][col] = s.amplitude(row).real();
        }
    }
    return m;
}

TEST(StraightU4, MatchesWrittenMatrix) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; trial++) {
        std::vector<double> theta = testing::random_angles(rng, 3);
        Matrix16 got = assemble(bare_u4(), theta);
        Matrix16 want = reference_u4(theta);
        for (size_t r = 0; r < 16; r++) {
            for (size_t c = 0; c < 16; c++) ASSERT_NEAR(got[r][c], want[r][c], 1e-12) << "entry " << r << "," << c;
        }
    }
}

TEST(StraightU4, Column5FiveTermExpansion) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; trial++) {
        std::vector<double> t = testing::random_angles(rng, 3, 0.1, 3.0);
        double c0 = std::cos(t[0] / 2), s0 = std::sin(t[0] / 2);
        double c1 = std::cos(t[1] / 2), s1 = std::sin(t[1] / 2);
        double c2 = std::cos(t[2] / 2), s2 = std::sin(t[2] / 2);
        StateVector s = init_basis(4, BasisState::from_string("0101"));
        apply_circuit(s, bare_u4(), t);
        std::vector<BasisState> expected_support{
            BasisState::from_string("0011"), BasisState::from_string("0101"), BasisState::from_string("0110"),
            BasisState::from_string("1001"), BasisState::from_string("1010")};
        EXPECT_EQ(support(s), expected_support);
        EXPECT_NEAR(s.amplitude(0b0011).real(), s1 * c0, 1e-14);
        EXPECT_NEAR(s.amplitude(0b0101).real(), c2 * c1 * c0, 1e-14);
        EXPECT_NEAR(s.amplitude(0b0110).real(), -s2 * c1 * c0, 1e-14);
        EXPECT_NEAR(s.amplitude(0b1001).real(), -c2 * s0, 1e-14);
        EXPECT_NEAR(s.amplitude(0b1010).real(), s2 * s0, 1e-14);
        EXPECT_EQ(s.amplitude(0b1100), Amplitude(0.0));
    }
}

TEST(StraightU4, HalfAngleAmplitudes) {
    StateVector s = init_basis(4, BasisState::from_string("0101"));
    std::vector<double> t(3, kPi / 2);
    apply_circuit(s, bare_u4(), t);
    EXPECT_NEAR(s.amplitude(0b0011).real(), 0.5, 1e-5);
    EXPECT_NEAR(s.amplitude(0b0101).real(), 0.35355, 1e-5);
    EXPECT_NEAR(s.amplitude(0b0110).real(), -0.35355, 1e-5);
    EXPECT_NEAR(s.amplitude(0b1001).real(), -0.5, 1e-5);
    EXPECT_NEAR(s.amplitude(0b1010).real(), 0.5, 1e-5);
    EXPECT_NEAR(probability_of(s, BasisState::from_string("0101")), 0.125, 1e-12);
}

TEST(Straight, Layout) {
    Circuit c6 = build_straight(DickeSpec(6, 3));
    EXPECT_EQ(c6.blocks.size(), 5u);
    Circuit c2 = build_straight(DickeSpec(2, 1));
    EXPECT_EQ(c2.blocks.size(), 1u);
    EXPECT_EQ(c2.initial_x, std::vector<int>{0});
    Circuit c4 = build_straight(DickeSpec(4, 2));
    EXPECT_EQ(c4.blocks.size(), 3u);
    EXPECT_EQ(c4.initial_x, (std::vector<int>{2, 0}));
    EXPECT_THROW(build_straight(DickeSpec(4, 0)), std::invalid_argument);
}

TEST(Straight, MissesTopState) {
    // The single staircase is not complete: |1100> never appears from |0101>.
    Circuit c = build_straight(DickeSpec(4, 2));
    std::mt19937_64 rng(8);
    StateVector s = simulate(c, testing::random_angles(rng, 3, 0.1, 3.0));
    EXPECT_EQ(support(s).size(), 5u);
    EXPECT_EQ(probability_of(s, BasisState::from_string("1100")), 0.0);
}

TEST(Folded, Layout) {
    Circuit c = build_folded(DickeSpec(6, 3));
    ASSERT_EQ(c.blocks.size(), 6u);
    std::vector<int> lowers;
    for (const Block &b : c.blocks) lowers.push_back(b.lower);
    EXPECT_EQ(lowers, (std::vector<int>{4, 2, 0, 3, 1, 2}));
    EXPECT_EQ(build_folded(DickeSpec(12, 6)).blocks.size(), 21u);
    Circuit c4 = build_folded(DickeSpec(4, 2));
    EXPECT_EQ(c4.initial_x, (std::vector<int>{2, 0}));
    EXPECT_EQ(c4.blocks.size(), 3u);
}

TEST(Folded, BlockCountFormula) {
    for (int n = 2; n <= 24; n += 2) {
        Circuit c = build_folded(DickeSpec(n, n / 2));
        EXPECT_EQ(static_cast<int>(c.blocks.size()), (n * n + 2 * n) / 8) << "n=" << n;
        EXPECT_EQ(folded_block_count(n, n / 2), (n * n + 2 * n) / 8);
        for (const Block &b : c.blocks) {
            EXPECT_EQ(b.upper, b.lower + 1);
            EXPECT_GE(b.lower, 0);
            EXPECT_LE(b.upper, n - 1);
        }
    }
}

TEST(Folded, ZeroAnglesKeepInitialState) {
    Circuit c = build_folded(DickeSpec(6, 3));
    StateVector s = simulate(c, std::vector<double>(static_cast<size_t>(c.num_slots()), 0.0));
    EXPECT_EQ(support(s), std::vector<BasisState>{BasisState::from_string("010101")});
}

TEST(Folded, CompleteForSmallRegisters) {
    std::mt19937_64 rng(99);
    for (int n = 2; n <= 10; n++) {
        for (int k = 1; k < n; k++) {
            Circuit c = dicke_circuit(DickeSpec(n, k));
            StateVector s = simulate(c, testing::random_angles(rng, c.num_slots(), 0.05, kPi - 0.05));
            EXPECT_EQ(testing::nonzero_support(s).size(), binomial(n, k)) << "n=" << n << " k=" << k;
        }
    }
}

TEST(Folded, FirstLayerProductRatio) {
    // After the first layer D^4_2 is a product over the pairs, so a(0101)a(1010) = a(0110)a(1001).
    std::mt19937_64 rng(17);
    Circuit full = build_folded(DickeSpec(4, 2));
    for (int trial = 0; trial < 20; trial++) {
        Circuit first = full;
        first.blocks.resize(2);
        StateVector s = simulate(first, testing::random_angles(rng, first.num_slots()));
        double lhs = (s.amplitude(0b0101) * s.amplitude(0b1010)).real();
        double rhs = (s.amplitude(0b0110) * s.amplitude(0b1001)).real();
        EXPECT_NEAR(lhs, rhs, 1e-10);
    }
}

TEST(Conjugate, MatchesComplementSupport) {
    std::mt19937_64 rng(23);
    for (int n = 2; n <= 10; n++) {
        for (int k = n / 2 + 1; k <= n; k++) {
            Circuit c = conjugate_form(DickeSpec(n, k));
            StateVector s = simulate(c, testing::random_angles(rng, c.num_slots(), 0.05, kPi - 0.05));
            std::vector<BasisState> sup = testing::nonzero_support(s);
            EXPECT_EQ(sup.size(), binomial(n, k));
            Circuit base = k < n ? build_folded(DickeSpec(n, n - k)) : Circuit{n, 0, Structure::Folded, {}, {}, {}};
            StateVector b = simulate(base, testing::random_angles(rng, base.num_slots(), 0.05, kPi - 0.05));
            std::vector<BasisState> flipped;
            for (const BasisState &x : testing::nonzero_support(b)) flipped.emplace_back(n, x.bits() ^ low_mask(n));
            std::sort(flipped.begin(), flipped.end());
            EXPECT_EQ(sup, flipped);
        }
    }
    Circuit c22 = conjugate_form(DickeSpec(2, 2));
    EXPECT_TRUE(c22.blocks.empty());
    EXPECT_EQ(c22.final_x.size(), 2u);
    StateVector s32 = simulate(conjugate_form(DickeSpec(3, 2)), std::vector<double>{1.0, 2.0});
    EXPECT_EQ(support(s32).size(), 3u);
}

TEST(Reachability, TwoQubitTargets) {
    EXPECT_EQ(reachability_params(DickeSpec(2, 1), BasisState::from_string("01")), ParameterVector{0.0});
    EXPECT_EQ(reachability_params(DickeSpec(2, 1), BasisState::from_string("10")), ParameterVector{kPi});
}

TEST(Reachability, EveryStateUpToSixQubits) {
    for (int n = 2; n <= 6; n++) {
        for (int k = 1; k < n; k++) {
            DickeSpec spec(n, k);
            Circuit c = dicke_circuit(spec);
            for_each_combination(n, k, [&](uint64_t bits) {
                BasisState target(n, bits);
                StateVector s = simulate(c, reachability_params(spec, target));
                EXPECT_GE(probability_of(s, target), 1 - 1e-10) << target.to_string();
            });
        }
    }
    EXPECT_THROW(reachability_params(DickeSpec(4, 2), BasisState::from_string("0111")), std::invalid_argument);
}

TEST(CircuitText, RoundTrip) {
    for (DickeSpec spec : {DickeSpec(6, 3), DickeSpec(5, 4), DickeSpec(7, 2)}) {
        Circuit c = dicke_circuit(spec);
        std::istringstream in(circuit_to_string(c));
        EXPECT_EQ(parse_circuit(in), c);
    }
    std::istringstream bad("4 2 folded\n3 1 0\n");
    EXPECT_THROW(parse_circuit(bad), std::invalid_argument);
}

}  // namespace
}  // namespace dickevqe
