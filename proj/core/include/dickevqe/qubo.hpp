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
#include <span>
#include <vector>

namespace dickevqe {

/// Dense row-major square matrix.
class SquareMatrix {
   public:
    SquareMatrix() = default;
    explicit SquareMatrix(int n, double fill = 0.0) : n_(n), data_(static_cast<size_t>(n) * n, fill) {}

    int size() const { return n_; }
    double &operator()(int i, int j) { return data_[static_cast<size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * n_ + j]; }
    std::span<const double> row(int i) const { return {data_.data() + static_cast<size_t>(i) * n_, static_cast<size_t>(n_)}; }
    const std::vector<double> &data() const { return data_; }

    friend bool operator==(const SquareMatrix &, const SquareMatrix &) = default;

   private:
    int n_ = 0;
    std::vector<double> data_;
};

/// E(x) = constant + sum_i linear_i x_i + sum_{i<j} coupling(i,j) x_i x_j over binary x,
/// with bit i of the basis index holding x_i. `coupling` is symmetric with a zero diagonal.
struct Qubo {
    int n = 0;
    std::vector<double> linear;
    SquareMatrix coupling;
    double constant = 0.0;

    Qubo() = default;
    explicit Qubo(int num_vars) : n(num_vars), linear(static_cast<size_t>(num_vars), 0.0), coupling(num_vars) {}

    double energy(uint64_t bits) const;

    /// Adds w to the (i, j) coupling symmetrically.
    void add_coupling(int i, int j, double w);
};

/// Energy change of moving a one from bit `from` to bit `to` (from set, to clear).
double swap_delta(const Qubo &q, uint64_t bits, int from, int to);

/// Problem on the low n-1 bits obtained by pinning the top bit to `value`.
Qubo pin_top_bit(const Qubo &q, bool value);

/// Relabels variables: new variable j is old variable perm[j].
Qubo permute(const Qubo &q, std::span<const int> perm);

/// Bit j of the result is bit perm[j] of `bits`.
uint64_t permute_bits(uint64_t bits, std::span<const int> perm);
/// Inverse of permute_bits.
uint64_t unpermute_bits(uint64_t bits, std::span<const int> perm);

}  // namespace dickevqe
