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

#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace dickevqe {

namespace {

std::string spec_text(DickeSpec s) { return "(n=" + std::to_string(s.n) + ", k=" + std::to_string(s.k) + ")"; }

}  // namespace

Circuit build_straight(DickeSpec spec) {
    DickeSpec checked(spec.n, spec.k);
    if (checked.k == 0 || checked.k == checked.n) {
        throw std::invalid_argument("straight staircase needs 1 <= k <= n-1, got " + spec_text(spec));
    }
    Circuit c;
    c.n = spec.n;
    c.k = spec.k;
    c.structure = Structure::Straight;
    int placed = 0;
    for (int q = spec.n - 2; q >= 0 && placed < spec.k; q -= 2, placed++) {
        c.initial_x.push_back(q);
    }
    for (int q = spec.n - 1; q >= 0 && placed < spec.k; q -= 2, placed++) {
        c.initial_x.push_back(q);
    }
    int slot = 0;
    for (int upper = spec.n - 1; upper >= 1; upper--) {
        c.blocks.push_back({upper, upper - 1, slot++});
    }
    return c;
}

int folded_block_count(int n, int k) {
    int total = 0;
    for (int s = n - k; s >= 1; s--) {
        total += std::min(s, k);
    }
    return total;
}

Circuit build_folded(DickeSpec spec) {
    DickeSpec checked(spec.n, spec.k);
    if (checked.k < 1 || 2 * checked.k > checked.n) {
        throw std::invalid_argument("folded staircase needs 1 <= k <= n/2, got " + spec_text(spec));
    }
    const int n = spec.n;
    const int k = spec.k;
    Circuit c;
    c.n = n;
    c.k = k;
    c.structure = Structure::Folded;
    for (int i = 1; i <= k; i++) {
        c.initial_x.push_back(n - 2 * i);
    }
    int slot = 0;
    for (int s = n - k; s >= 1; s--) {
        for (int lower = k + s - 2; lower >= std::abs(s - k); lower -= 2) {
            c.blocks.push_back({lower + 1, lower, slot++});
        }
    }
    return c;
}

Circuit conjugate_form(DickeSpec spec) {
    DickeSpec checked(spec.n, spec.k);
    if (2 * checked.k <= checked.n) {
        throw std::invalid_argument("conjugate form needs k > n/2, got " + spec_text(spec) + "; use build_folded");
    }
    Circuit c;
    if (spec.k == spec.n) {
        c.n = spec.n;
    } else {
        c = build_folded({spec.n, spec.n - spec.k});
    }
    c.k = spec.k;
    c.structure = Structure::Conjugate;
    for (int q = spec.n - 1; q >= 0; q--) {
        c.final_x.push_back(q);
    }
    return c;
}

Circuit dicke_circuit(DickeSpec spec) {
    DickeSpec checked(spec.n, spec.k);
    if (checked.k == 0) {
        Circuit c;
        c.n = spec.n;
        c.k = 0;
        return c;
    }
    if (2 * checked.k <= checked.n) {
        return build_folded(spec);
    }
    return conjugate_form(spec);
}

ParameterVector reachability_params(DickeSpec spec, const BasisState &target) {
    DickeSpec checked(spec.n, spec.k);
    if (target.num_qubits() != spec.n) {
        throw std::invalid_argument("target width does not match the Dicke register");
    }
    if (target.hamming_weight() != spec.k) {
        throw std::invalid_argument("target " + target.to_string() + " has weight " +
                                    std::to_string(target.hamming_weight()) + ", expected " + std::to_string(spec.k));
    }
    const Circuit c = dicke_circuit(checked);
    // With every angle in {0, pi} each block is either the identity or a signed swap of its
    // two bits, so the register stays a single basis state and the search is over bit paths.
    uint64_t start = 0;
    for (int q : c.initial_x) {
        start ^= uint64_t{1} << q;
    }
    uint64_t goal = target.bits();
    for (int q : c.final_x) {
        goal ^= uint64_t{1} << q;
    }
    const size_t m = c.blocks.size();
    std::unordered_map<uint64_t, bool> dead;  // key: bits * (m + 1) + position
    auto swap_bits = [](uint64_t bits, const Block &b) {
        bool hi = (bits >> b.upper) & 1u;
        bool lo = (bits >> b.lower) & 1u;
        if (hi == lo) {
            return bits;
        }
        return bits ^ (uint64_t{1} << b.upper) ^ (uint64_t{1} << b.lower);
    };
    std::vector<int> choice(m, 0);
    auto search = [&](auto &&self, size_t pos, uint64_t bits) -> bool {
        if (pos == m) {
            return bits == goal;
        }
        uint64_t key = bits * (m + 1) + pos;
        if (dead.count(key)) {
            return false;
        }
        choice[pos] = 0;
        if (self(self, pos + 1, bits)) {
            return true;
        }
        uint64_t swapped = swap_bits(bits, c.blocks[pos]);
        if (swapped != bits) {
            choice[pos] = 1;
            if (self(self, pos + 1, swapped)) {
                return true;
            }
        }
        choice[pos] = 0;
        dead[key] = true;
        return false;
    };
    if (!search(search, 0, start)) {
        throw std::logic_error("target " + target.to_string() + " is not reachable by the " + spec_text(spec) +
                               " circuit");
    }
    ParameterVector params(static_cast<size_t>(c.num_slots()), 0.0);
    for (size_t i = 0; i < m; i++) {
        if (choice[i]) {
            params[static_cast<size_t>(c.blocks[i].slot)] = std::numbers::pi;
        }
    }
    return params;
}

}  // namespace dickevqe
