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

#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "dickevqe/circuit.hpp"

namespace dickevqe::testing {

using Matrix16 = std::array<std::array<double, 16>, 16>;

/// Straight U_4 with no X layer: blocks (3,2), (2,1), (1,0) carrying theta_0..theta_2.
inline Circuit bare_u4() {
    Circuit c;
    c.n = 4;
    c.k = 2;
    c.structure = Structure::Straight;
    c.blocks = {{3, 2, 0}, {2, 1, 1}, {1, 0, 2}};
    return c;
}

/// The 16x16 matrix written out entry by entry.
inline Matrix16 reference_u4(const std::vector<double> &theta) {
    double c0 = std::cos(theta[0] / 2), s0 = std::sin(theta[0] / 2);
    double c1 = std::cos(theta[1] / 2), s1 = std::sin(theta[1] / 2);
    double c2 = std::cos(theta[2] / 2), s2 = std::sin(theta[2] / 2);
    Matrix16 m{};
    auto set = [&](int r, int c, double v) { m[static_cast<size_t>(r)][static_cast<size_t>(c)] = v; };
    set(0, 0, 1);
    set(1, 1, c2), set(1, 2, s2 * c1), set(1, 4, s2 * s1 * c0), set(1, 8, s2 * s1 * s0);
    set(2, 1, -s2), set(2, 2, c2 * c1), set(2, 4, c2 * s1 * c0), set(2, 8, c2 * s1 * s0);
    set(3, 3, c1), set(3, 5, s1 * c0), set(3, 9, s1 * s0);
    set(4, 2, -s1), set(4, 4, c1 * c0), set(4, 8, c1 * s0);
    set(5, 3, -c2 * s1), set(5, 5, c2 * c1 * c0), set(5, 6, s2 * c0), set(5, 9, c2 * c1 * s0), set(5, 10, s2 * s0);
    set(6, 3, s2 * s1), set(6, 5, -s2 * c1 * c0), set(6, 6, c2 * c0), set(6, 9, -s2 * c1 * s0), set(6, 10, c2 * s0);
    set(7, 7, c0), set(7, 11, s0);
    set(8, 4, -s0), set(8, 8, c0);
    set(9, 5, -c2 * s0), set(9, 6, -s2 * c1 * s0), set(9, 9, c2 * c0), set(9, 10, s2 * c1 * c0), set(9, 12, s2 * s1);
    set(10, 5, s2 * s0), set(10, 6, -c2 * c1 * s0), set(10, 9, -s2 * c0), set(10, 10, c2 * c1 * c0),
        set(10, 12, c2 * s1);
    set(11, 7, -c1 * s0), set(11, 11, c1 * c0), set(11, 13, s1);
    set(12, 6, s1 * s0), set(12, 10, -s1 * c0), set(12, 12, c1);
    set(13, 7, c2 * s1 * s0), set(13, 11, -c2 * s1 * c0), set(13, 13, c2 * c1), set(13, 14, s2);
    set(14, 7, -s2 * s1 * s0), set(14, 11, s2 * s1 * c0), set(14, 13, -s2 * c1), set(14, 14, c2);
    set(15, 15, 1);
    return m;
}

}  // namespace dickevqe::testing
