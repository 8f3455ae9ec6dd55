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

#include <benchmark/benchmark.h>

#include <random>

#include "dickevqe/ansatz.hpp"
#include "dickevqe/partition.hpp"
#include "dickevqe/qsim.hpp"

namespace {

using namespace dickevqe;

ParameterVector random_params(int count, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(0.0, 3.14159);
    ParameterVector p(static_cast<size_t>(count));
    for (double &x : p) x = d(rng);
    return p;
}

void BM_SimulateDicke(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    Circuit c = dicke_circuit(DickeSpec(n, n / 2));
    ParameterVector params = random_params(c.num_slots(), 1);
    for (auto _ : state) {
        StateVector s = simulate(c, params);
        benchmark::DoNotOptimize(s.amplitudes().data());
    }
    state.counters["blocks"] = static_cast<double>(c.blocks.size());
}
BENCHMARK(BM_SimulateDicke)->DenseRange(8, 20, 4)->Unit(benchmark::kMicrosecond);

void BM_ApplyVBlock(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    StateVector s = init_basis(n, BasisState(n, low_mask(n / 2)));
    for (auto _ : state) {
        apply_v_block(s, n / 2, n / 2 - 1, 0.3);
        benchmark::ClobberMemory();
    }
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) * (int64_t{16} << n));
}
BENCHMARK(BM_ApplyVBlock)->DenseRange(10, 22, 4);

// Sampling a depth-2 sub-ansatz of D^40_20 on 10-qubit fragments.
void BM_RunSubansatz(benchmark::State &state) {
    SubAnsatz sa = resolve(DickeSpec(40, 20), SubAnsatzId{{{10}, {5, 5}}});
    std::vector<ParameterVector> params;
    for (const auto &f : sa.fragments) params.push_back(random_params(fragment_circuit(f).num_slots(), 3));
    const int shots = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto samples = run_subansatz(sa, params, shots, 9);
        benchmark::DoNotOptimize(samples.data());
    }
}
BENCHMARK(BM_RunSubansatz)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond);

}  // namespace
