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

#include "dickevqe/qubo.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace dickevqe {

double Qubo::energy(uint64_t bits) const {
    double e = constant;
    uint64_t rest = bits;
    while (rest) {
        int i = std::countr_zero(rest);
        rest &= rest - 1;
        e += linear[static_cast<size_t>(i)];
        auto row = coupling.row(i);
        uint64_t higher = rest;
        while (higher) {
            int j = std::countr_zero(higher);
            higher &= higher - 1;
            e += row[static_cast<size_t>(j)];
        }
    }
    return e;
}

void Qubo::add_coupling(int i, int j, double w) {
    if (i == j) {
        throw std::invalid_argument("QUBO coupling needs two distinct variables");
    }
    coupling(i, j) += w;
    coupling(j, i) += w;
}

double swap_delta(const Qubo &q, uint64_t bits, int from, int to) {
    // Local field of a variable against the other set bits, excluding `from`.
    uint64_t others = bits & ~(uint64_t{1} << from);
    auto field = [&](int v) {
        double f = q.linear[static_cast<size_t>(v)];
        auto row = q.coupling.row(v);
        uint64_t rest = others;
        while (rest) {
            int j = std::countr_zero(rest);
            rest &= rest - 1;
            if (j != v) {
                f += row[static_cast<size_t>(j)];
            }
        }
        return f;
    };
    return field(to) - field(from);
}

Qubo pin_top_bit(const Qubo &q, bool value) {
    if (q.n < 2) {
        throw std::invalid_argument("cannot pin the only variable of a QUBO");
    }
    const int top = q.n - 1;
    Qubo out(top);
    out.constant = q.constant;
    for (int i = 0; i < top; i++) {
        out.linear[static_cast<size_t>(i)] = q.linear[static_cast<size_t>(i)];
        for (int j = 0; j < top; j++) {
            out.coupling(i, j) = q.coupling(i, j);
        }
    }
    if (value) {
        out.constant += q.linear[static_cast<size_t>(top)];
        for (int i = 0; i < top; i++) {
            out.linear[static_cast<size_t>(i)] += q.coupling(i, top);
        }
    }
    return out;
}

Qubo permute(const Qubo &q, std::span<const int> perm) {
    if (perm.size() != static_cast<size_t>(q.n)) {
        throw std::invalid_argument("permutation size does not match the QUBO");
    }
    Qubo out(q.n);
    out.constant = q.constant;
    for (int a = 0; a < q.n; a++) {
        out.linear[static_cast<size_t>(a)] = q.linear[static_cast<size_t>(perm[a])];
        for (int b = 0; b < q.n; b++) {
            out.coupling(a, b) = q.coupling(perm[a], perm[b]);
        }
    }
    return out;
}

uint64_t permute_bits(uint64_t bits, std::span<const int> perm) {
    uint64_t out = 0;
    for (size_t j = 0; j < perm.size(); j++) {
        if ((bits >> perm[j]) & 1u) {
            out |= uint64_t{1} << j;
        }
    }
    return out;
}

uint64_t unpermute_bits(uint64_t bits, std::span<const int> perm) {
    uint64_t out = 0;
    for (size_t j = 0; j < perm.size(); j++) {
        if ((bits >> j) & 1u) {
            out |= uint64_t{1} << perm[j];
        }
    }
    return out;
}

}  // namespace dickevqe
