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

#include "dickevqe/basis.hpp"
#include "dickevqe/circuit.hpp"

namespace dickevqe {

/// Straight staircase: X on q_{n-2}, q_{n-4}, ... then n-1 blocks from (n-1, n-2) down to (1, 0).
/// Slot i belongs to the i-th applied block. Requires 1 <= k <= n-1.
/// For k > n/2 the X placements continue on q_{n-1}, q_{n-3}, ... once the even offsets run out.
Circuit build_straight(DickeSpec spec);

/// Folded staircase for 1 <= k <= n/2.
///
/// X on q_{n-2}, q_{n-4}, ..., q_{n-2k}, then layers s = n-k, n-k-1, ..., 1. Layer s holds
/// min(s, k) blocks whose lower qubits run from k+s-2 down to |s-k| in steps of two, so the
/// first layer covers lower qubits n-2, ..., n-2k and the last is the single block at k-1.
/// Blocks within a layer act on disjoint pairs; slots follow application order.
Circuit build_folded(DickeSpec spec);

/// For n/2 < k <= n: build_folded(n, n-k) followed by X on every qubit. k = n gives the
/// bare X^n circuit.
Circuit conjugate_form(DickeSpec spec);

/// The circuit used for an arbitrary weight: empty for k = 0, folded for k <= n/2,
/// conjugate otherwise.
Circuit dicke_circuit(DickeSpec spec);

/// Block count of the folded circuit for (n, k), k <= n/2.
int folded_block_count(int n, int k);

/// Parameters in {0, pi} that make `target` the output of dicke_circuit(spec) with
/// probability one. Returns the lexicographically smallest such vector (0 before pi,
/// slot order). Throws if the weight of `target` differs from spec.k.
ParameterVector reachability_params(DickeSpec spec, const BasisState &target);

}  // namespace dickevqe
