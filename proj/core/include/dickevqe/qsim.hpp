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
#include <random>
#include <span>
#include <vector>

#include "dickevqe/basis.hpp"
#include "dickevqe/circuit.hpp"
#include "dickevqe/random.hpp"

namespace dickevqe {

inline constexpr int kMaxStateQubits = 26;

using Amplitude = std::complex<double>;

/// Dense statevector over 2^n basis states. Index b holds the amplitude of the basis
/// state whose bit p is the value of qubit q_p.
class StateVector {
   public:
    explicit StateVector(int num_qubits);

    int num_qubits() const { return num_qubits_; }
    size_t size() const { return amps_.size(); }

    Amplitude amplitude(uint64_t index) const { return amps_.at(index); }
    std::span<const Amplitude> amplitudes() const { return amps_; }
    std::span<Amplitude> amplitudes() { return amps_; }

    double norm_squared() const;

   private:
    int num_qubits_;
    std::vector<Amplitude> amps_;
};

/// Largest register ever allocated by a StateVector in this process (high-water mark).
int peak_state_qubits();
void reset_peak_state_qubits();

StateVector init_basis(int num_qubits, const BasisState &b);

/// Applies the 4x4 block
///   |00> -> |00>, |11> -> |11>,
///   |01> -> cos(t/2)|01> - sin(t/2)|10>,
///   |10> -> sin(t/2)|01> + cos(t/2)|10>
/// on the pair (upper, lower), upper = lower + 1.
void apply_v_block(StateVector &s, int upper, int lower, double theta);

void apply_x(StateVector &s, int qubit);

/// Runs a circuit; `params[slot]` feeds each block.
void apply_circuit(StateVector &s, const Circuit &c, std::span<const double> params);

/// Convenience: |0...0> through the circuit.
StateVector simulate(const Circuit &c, std::span<const double> params);

double probability_of(const StateVector &s, const BasisState &b);

/// Every basis state with probability strictly above eps, in increasing index order.
std::vector<BasisState> support(const StateVector &s, double eps = 1e-12);

/// Born-rule sampler with a precomputed cumulative table.
class Sampler {
   public:
    explicit Sampler(const StateVector &s);

    int num_qubits() const { return num_qubits_; }
    uint64_t draw(std::mt19937_64 &rng) const;

   private:
    int num_qubits_;
    std::vector<double> cdf_;
};

/// Draws `shots` outcomes. With `postselect_hw`, draws of any other weight are dropped.
std::vector<BasisState> sample(const StateVector &s, int shots, uint64_t seed,
                               std::optional<int> postselect_hw = std::nullopt);

}  // namespace dickevqe
