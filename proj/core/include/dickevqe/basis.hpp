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

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

namespace dickevqe {

/// Largest register width a BasisState can describe.
inline constexpr int kMaxBasisBits = 64;

/// An n-bit computational basis state. Bit p of `bits()` is the state of qubit q_p,
/// so q_{n-1} is the most significant bit. Doubles as an asset-selection vector.
class BasisState {
   public:
    BasisState() = default;
    BasisState(int num_qubits, uint64_t bits);

    /// Parses an MSB-first string such as "0101" (qubit q_{n-1} first).
    static BasisState from_string(std::string_view text);

    int num_qubits() const { return num_qubits_; }
    uint64_t bits() const { return bits_; }
    int hamming_weight() const { return weight_; }
    bool bit(int qubit) const { return ((bits_ >> qubit) & 1u) != 0; }

    /// MSB-first rendering, e.g. |0101> -> "0101".
    std::string to_string() const;

    friend bool operator==(const BasisState &, const BasisState &) = default;
    friend auto operator<=>(const BasisState &a, const BasisState &b) {
        if (auto c = a.num_qubits_ <=> b.num_qubits_; c != 0) {
            return c;
        }
        return a.bits_ <=> b.bits_;
    }

   private:
    int num_qubits_ = 0;
    uint64_t bits_ = 0;
    int weight_ = 0;
};

inline uint64_t low_mask(int n) { return n >= 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1; }

inline int popcount(uint64_t x) { return std::popcount(x); }

inline int hamming_distance(uint64_t a, uint64_t b) { return std::popcount(a ^ b); }

/// Exact binomial coefficient. Throws std::overflow_error if the value exceeds 64 bits.
uint64_t binomial(int n, int k);

/// Smallest n-bit value with exactly k ones (the k lowest bits set).
inline uint64_t first_combination(int k) { return low_mask(k); }

/// Next larger integer with the same popcount (Gosper's hack). Caller checks the width.
inline uint64_t next_combination(uint64_t x) {
    if (x == 0) {
        return 0;
    }
    uint64_t smallest = x & (~x + 1);
    uint64_t ripple = x + smallest;
    uint64_t ones = x ^ ripple;
    ones = (ones >> 2) / smallest;
    return ripple | ones;
}

/// Calls fn(bits) for every n-bit value with weight k, in increasing order.
template <typename Fn>
void for_each_combination(int n, int k, Fn &&fn) {
    if (k < 0 || k > n) {
        return;
    }
    if (k == 0) {
        fn(uint64_t{0});
        return;
    }
    uint64_t limit = low_mask(n);
    uint64_t last = low_mask(k) << (n - k);
    for (uint64_t x = first_combination(k);; x = next_combination(x)) {
        fn(x);
        if (x == last || x > limit) {
            break;
        }
    }
}

}  // namespace dickevqe
