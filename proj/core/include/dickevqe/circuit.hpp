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

#include <iosfwd>
#include <string>
#include <vector>

namespace dickevqe {

/// Target Dicke state |D^n_k>: n qubits, Hamming weight k.
struct DickeSpec {
    int n = 0;
    int k = 0;

    DickeSpec() = default;
    DickeSpec(int n_, int k_);

    friend bool operator==(const DickeSpec &, const DickeSpec &) = default;
};

enum class Structure { Straight, Folded, Conjugate };

const char *structure_name(Structure s);
Structure parse_structure(const std::string &name);

/// One parameterized two-qubit block on an adjacent pair, upper = lower + 1.
struct Block {
    int upper = 0;
    int lower = 0;
    int slot = 0;

    friend bool operator==(const Block &, const Block &) = default;
};

/// A CCC ansatz: X flips on `initial_x`, then `blocks` in order, then X flips on `final_x`.
struct Circuit {
    int n = 0;
    int k = 0;
    Structure structure = Structure::Folded;
    std::vector<int> initial_x;
    std::vector<Block> blocks;
    std::vector<int> final_x;

    /// Number of distinct parameter slots (max slot + 1).
    int num_slots() const;

    friend bool operator==(const Circuit &, const Circuit &) = default;
};

/// Radians, one per parameter slot.
using ParameterVector = std::vector<double>;

/// Line-oriented text form:
///   n k structure
///   x <qubit>                 (initial X)
///   <upper> <lower> <slot>    (block)
///   xf <qubit>                (final X)
void write_circuit(std::ostream &out, const Circuit &c);
std::string circuit_to_string(const Circuit &c);
Circuit parse_circuit(std::istream &in);

}  // namespace dickevqe
