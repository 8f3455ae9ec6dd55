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

#include "dickevqe/basis.hpp"

#include <algorithm>
#include <stdexcept>

namespace dickevqe {

BasisState::BasisState(int num_qubits, uint64_t bits) : num_qubits_(num_qubits), bits_(bits) {
    if (num_qubits < 1 || num_qubits > kMaxBasisBits) {
        throw std::invalid_argument("basis state width must be in [1, 64], got " + std::to_string(num_qubits));
    }
    if ((bits & ~low_mask(num_qubits)) != 0) {
        throw std::out_of_range("basis state value does not fit in " + std::to_string(num_qubits) + " qubits");
    }
    weight_ = std::popcount(bits);
}

BasisState BasisState::from_string(std::string_view text) {
    if (text.size() >= 2 && text.front() == '|' && text.back() == '>') {
        text = text.substr(1, text.size() - 2);
    }
    if (text.empty() || text.size() > static_cast<size_t>(kMaxBasisBits)) {
        throw std::invalid_argument("bad basis state string");
    }
    uint64_t bits = 0;
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("basis state string may only contain 0 and 1");
        }
        bits = (bits << 1) | static_cast<uint64_t>(c == '1');
    }
    return BasisState(static_cast<int>(text.size()), bits);
}

std::string BasisState::to_string() const {
    std::string out(static_cast<size_t>(num_qubits_), '0');
    for (int q = 0; q < num_qubits_; q++) {
        if (bit(q)) {
            out[static_cast<size_t>(num_qubits_ - 1 - q)] = '1';
        }
    }
    return out;
}

uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (int i = 1; i <= k; i++) {
        acc = acc * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (acc > ~uint64_t{0}) {
            throw std::overflow_error("binomial coefficient exceeds 64 bits");
        }
    }
    return static_cast<uint64_t>(acc);
}

}  // namespace dickevqe
