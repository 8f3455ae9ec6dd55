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

#include "dickevqe/qsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dickevqe {

namespace {

std::atomic<int> g_peak_qubits{0};

void check_qubit(const StateVector &s, int q) {
    if (q < 0 || q >= s.num_qubits()) {
        throw std::out_of_range("qubit " + std::to_string(q) + " outside a " + std::to_string(s.num_qubits()) +
                                "-qubit register");
    }
}

}  // namespace

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxStateQubits) {
        throw std::invalid_argument("statevector width must be in [1, 26], got " + std::to_string(num_qubits));
    }
    amps_.assign(size_t{1} << num_qubits, Amplitude{0.0, 0.0});
    amps_[0] = 1.0;
    int seen = g_peak_qubits.load();
    while (num_qubits > seen && !g_peak_qubits.compare_exchange_weak(seen, num_qubits)) {
    }
}

double StateVector::norm_squared() const {
    double acc = 0;
    for (const auto &a : amps_) {
        acc += std::norm(a);
    }
    return acc;
}

int peak_state_qubits() { return g_peak_qubits.load(); }
void reset_peak_state_qubits() { g_peak_qubits.store(0); }

StateVector init_basis(int num_qubits, const BasisState &b) {
    if (b.num_qubits() != num_qubits) {
        throw std::invalid_argument("basis state width does not match register width");
    }
    StateVector s(num_qubits);
    auto amps = s.amplitudes();
    amps[0] = 0.0;
    amps[b.bits()] = 1.0;
    return s;
}

void apply_v_block(StateVector &s, int upper, int lower, double theta) {
    check_qubit(s, upper);
    check_qubit(s, lower);
    if (upper != lower + 1) {
        throw std::invalid_argument("V block needs an adjacent pair with upper = lower + 1, got (" +
                                    std::to_string(upper) + ", " + std::to_string(lower) + ")");
    }
    const double c = std::cos(theta / 2);
    const double sn = std::sin(theta / 2);
    auto amps = s.amplitudes();
    const uint64_t lo_bit = uint64_t{1} << lower;
    const uint64_t hi_bit = uint64_t{1} << upper;
    const uint64_t low_part = lo_bit - 1;
    const uint64_t count = uint64_t{1} << (s.num_qubits() - 2);
    // Walk every index with both pair bits cleared; splice in the two pair bits.
    for (uint64_t r = 0; r < count; r++) {
        uint64_t base = ((r & ~low_part) << 2) | (r & low_part);
        uint64_t i01 = base | lo_bit;
        uint64_t i10 = base | hi_bit;
        Amplitude a01 = amps[i01];
        Amplitude a10 = amps[i10];
        amps[i01] = c * a01 + sn * a10;
        amps[i10] = -sn * a01 + c * a10;
    }
}

void apply_x(StateVector &s, int qubit) {
    check_qubit(s, qubit);
    auto amps = s.amplitudes();
    const uint64_t bit = uint64_t{1} << qubit;
    for (uint64_t i = 0; i < amps.size(); i++) {
        if ((i & bit) == 0) {
            std::swap(amps[i], amps[i | bit]);
        }
    }
}

void apply_circuit(StateVector &s, const Circuit &c, std::span<const double> params) {
    if (c.n != s.num_qubits()) {
        throw std::invalid_argument("circuit is for " + std::to_string(c.n) + " qubits, state has " +
                                    std::to_string(s.num_qubits()));
    }
    if (params.size() < static_cast<size_t>(c.num_slots())) {
        throw std::invalid_argument("circuit needs " + std::to_string(c.num_slots()) + " parameters, got " +
                                    std::to_string(params.size()));
    }
    for (int q : c.initial_x) {
        apply_x(s, q);
    }
    for (const auto &b : c.blocks) {
        apply_v_block(s, b.upper, b.lower, params[static_cast<size_t>(b.slot)]);
    }
    for (int q : c.final_x) {
        apply_x(s, q);
    }
}

StateVector simulate(const Circuit &c, std::span<const double> params) {
    StateVector s(c.n);
    apply_circuit(s, c, params);
    return s;
}

double probability_of(const StateVector &s, const BasisState &b) {
    if (b.num_qubits() != s.num_qubits()) {
        throw std::invalid_argument("basis state width does not match register width");
    }
    return std::norm(s.amplitude(b.bits()));
}

std::vector<BasisState> support(const StateVector &s, double eps) {
    if (!(eps > 0)) {
        throw std::invalid_argument("support threshold must be positive");
    }
    std::vector<BasisState> out;
    auto amps = s.amplitudes();
    for (uint64_t i = 0; i < amps.size(); i++) {
        if (std::norm(amps[i]) > eps) {
            out.emplace_back(s.num_qubits(), i);
        }
    }
    return out;
}

Sampler::Sampler(const StateVector &s) : num_qubits_(s.num_qubits()) {
    auto amps = s.amplitudes();
    cdf_.resize(amps.size());
    double acc = 0;
    for (size_t i = 0; i < amps.size(); i++) {
        acc += std::norm(amps[i]);
        cdf_[i] = acc;
    }
}

uint64_t Sampler::draw(std::mt19937_64 &rng) const {
    double u = uniform01(rng) * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) {
        --it;
    }
    // upper_bound never lands on an entry whose cumulative value equals its predecessor's.
    return static_cast<uint64_t>(it - cdf_.begin());
}

std::vector<BasisState> sample(const StateVector &s, int shots, uint64_t seed, std::optional<int> postselect_hw) {
    if (shots < 1) {
        throw std::invalid_argument("sample needs at least one shot");
    }
    Sampler sampler(s);
    std::mt19937_64 rng(seed);
    std::vector<BasisState> out;
    out.reserve(static_cast<size_t>(shots));
    for (int i = 0; i < shots; i++) {
        uint64_t b = sampler.draw(rng);
        if (postselect_hw && std::popcount(b) != *postselect_hw) {
            continue;
        }
        out.emplace_back(s.num_qubits(), b);
    }
    return out;
}

}  // namespace dickevqe
