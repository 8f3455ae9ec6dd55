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

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "dickevqe/basis.hpp"
#include "dickevqe/problem.hpp"
#include "dickevqe/qsim.hpp"
#include "dickevqe/qubo.hpp"

namespace dickevqe::testing {

inline std::vector<double> random_angles(std::mt19937_64 &rng, int count, double lo = 0.0, double hi = 3.141592653589793) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(static_cast<size_t>(count));
    for (double &x : v) x = d(rng);
    return v;
}

/// States with any nonzero probability. Amplitudes outside the reachable set stay exactly zero.
inline std::vector<BasisState> nonzero_support(const StateVector &s) {
    return support(s, std::numeric_limits<double>::min());
}

inline Qubo random_qubo(int n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    Qubo q(n);
    q.constant = d(rng);
    for (int i = 0; i < n; i++) {
        q.linear[static_cast<size_t>(i)] = d(rng);
        for (int j = i + 1; j < n; j++) q.add_coupling(i, j, d(rng));
    }
    return q;
}

/// Minimum over all weight-k states by plain enumeration, independent of the library's search.
inline std::pair<uint64_t, double> exhaustive_min(const Qubo &q, int k) {
    uint64_t best = 0;
    double best_e = 0.0;
    bool first = true;
    for (uint64_t b = 0; b < (uint64_t{1} << q.n); b++) {
        if (popcount(b) != k) continue;
        double e = q.energy(b);
        if (first || e < best_e) {
            best = b;
            best_e = e;
            first = false;
        }
    }
    return {best, best_e};
}

}  // namespace dickevqe::testing
