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

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dickevqe/basis.hpp"
#include "dickevqe/circuit.hpp"

namespace dickevqe {

/// One term of |D^n_k> = sum_i a_i |D^j_i> (x) |D^{n-j}_{k-i}>; `upper` sits on the high qubits.
struct ProductTerm {
    int index = 0;
    DickeSpec upper;
    DickeSpec lower;
};

/// Product decomposition with an upper fragment of j qubits. Terms with i outside
/// [max(0, k-(n-j)), min(j, k)] are empty and left out.
std::vector<ProductTerm> decompose(DickeSpec spec, int j);

/// A contiguous block of qubits [offset, offset + size) prepared as |D^size_weight>.
struct Fragment {
    int offset = 0;
    int size = 0;
    int weight = 0;

    DickeSpec spec() const { return {size, weight}; }
    friend bool operator==(const Fragment &, const Fragment &) = default;
};

/// Number of children of a fragment under a midpoint split.
int split_options(const Fragment &f);
/// Smallest upper-half weight among a fragment's midpoint-split children.
int split_min_upper(const Fragment &f);
/// Child `local` of a midpoint split: {upper half, lower half}.
std::pair<Fragment, Fragment> split_child(const Fragment &f, int local);

/// Path through the recursive equilibrium partition. levels[l] holds one local index per
/// fragment present at depth l (1, 2, 4, ... entries), ordered from the highest fragment
/// down. A local index counts upper-half ones relative to the smallest admissible count,
/// so level 1 of |D^n_{n/2}> reads directly as "ones in the upper half".
struct SubAnsatzId {
    std::vector<std::vector<int>> levels;

    int depth() const { return static_cast<int>(levels.size()); }
    friend bool operator==(const SubAnsatzId &, const SubAnsatzId &) = default;
    friend auto operator<=>(const SubAnsatzId &, const SubAnsatzId &) = default;
};

/// Text form `sa^p_[...]`: levels joined by ';', entries by ','. Depth one may also be
/// written `sa^1_18`.
std::string format_id(const SubAnsatzId &id);
SubAnsatzId parse_id(std::string_view text);

/// A sub-ansatz resolved against its root: the product of `fragments` (highest first).
struct SubAnsatz {
    DickeSpec root;
    SubAnsatzId id;
    std::vector<Fragment> fragments;

    int num_qubits() const { return root.n; }
};

/// Resolves an id into fragments. Throws std::out_of_range for invalid indices.
SubAnsatz resolve(DickeSpec root, const SubAnsatzId &id);

/// Depth-0 "sub-ansatz": the whole register as one fragment.
SubAnsatz whole(DickeSpec root);

/// Recursive midpoint partition bookkeeping.
class PartitionTree {
   public:
    PartitionTree(DickeSpec root, int depth);

    DickeSpec root() const { return root_; }
    int depth() const { return depth_; }

    /// Children of `node` one level deeper, in lexicographic order of the new level's indices.
    std::vector<SubAnsatzId> children(const SubAnsatzId &node) const;
    /// Option count per fragment for the level below `node` (the child grid's shape).
    std::vector<int> child_shape(const SubAnsatzId &node) const;
    /// Every full-depth sub-ansatz.
    std::vector<SubAnsatzId> leaves() const;
    /// Number of full-depth sub-ansatze, counted without enumerating.
    uint64_t leaf_count() const;

   private:
    DickeSpec root_;
    int depth_;
};

PartitionTree equilibrium_partition(DickeSpec spec, int depth);

/// Product of binomials over the fragments.
uint64_t subansatz_basis_count(const SubAnsatz &sa);

/// Lazily walks all basis states of a sub-ansatz: each fragment's bitstrings in increasing
/// order, the highest fragment varying slowest (so the overall sequence is increasing).
class SubspaceEnumerator {
   public:
    explicit SubspaceEnumerator(const SubAnsatz &sa);
    explicit SubspaceEnumerator(int num_qubits, std::vector<Fragment> fragments);

    std::optional<BasisState> next();

   private:
    uint64_t compose() const;

    int num_qubits_;
    std::vector<Fragment> fragments_;
    std::vector<uint64_t> current_;
    bool started_ = false;
    bool done_ = false;
};

std::vector<BasisState> enumerate_subansatz(const SubAnsatz &sa);

/// Level-1 index (upper-half weight) of a basis state of |D^n_{n/2}>.
int level1_index(const BasisState &b);

/// Circuit for one fragment on its own `size`-qubit register.
Circuit fragment_circuit(const Fragment &f);

/// Samples a sub-ansatz as a product of independent fragment simulations.
/// `params[f]` drives fragment f's circuit. Every fragment must fit in a statevector.
std::vector<BasisState> run_subansatz(const SubAnsatz &sa, const std::vector<ParameterVector> &params, int shots,
                                      uint64_t seed);

/// -|a|^2 log2 |a|^2 - |b|^2 log2 |b|^2, with 0 log 0 = 0.
double entanglement_entropy(std::complex<double> a, std::complex<double> b);

/// Loose bound prod_{i=1..p} (n / 2^i)^(2^(i-1)) on the number of depth-p sub-ansatze.
double loose_bound_product(int n, int p);
/// Closed form n^(2^p - 1) / 2^((p-1) 2^p + 1) of the same bound.
double loose_bound_closed(int n, int p);

}  // namespace dickevqe
