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

#include "dickevqe/locate.hpp"
#include "dickevqe/problem.hpp"

namespace {

using namespace dickevqe;

CostModel sorted_model(int n, uint64_t seed) {
    return make_cost_model(reorder(synth_assets(n, seed), ReorderKey::ByReturn).first);
}

void BM_SubspaceMin(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    CostModel m = sorted_model(n, 11);
    SubAnsatz sa = resolve(DickeSpec(n, n / 2), SubAnsatzId{{{n / 4}}});
    for (auto _ : state) {
        CellMin r = subspace_min(m.qubo, sa);
        benchmark::DoNotOptimize(r.energy);
    }
    state.counters["states"] = static_cast<double>(subansatz_basis_count(sa));
}
BENCHMARK(BM_SubspaceMin)->DenseRange(12, 20, 4)->Unit(benchmark::kMicrosecond);

void BM_Greedy(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    CostModel m = sorted_model(n, 12);
    for (auto _ : state) {
        GreedyResult g = greedy_bitstring(m.qubo, low_mask(n / 2));
        benchmark::DoNotOptimize(g.energy);
    }
}
BENCHMARK(BM_Greedy)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMicrosecond);

void BM_LocateHard(benchmark::State &state) {
    CostModel m = sorted_model(static_cast<int>(state.range(0)), 13);
    for (auto _ : state) {
        LocateReport r = locate_hard(m, 2);
        benchmark::DoNotOptimize(r.candidate_energy);
    }
}
BENCHMARK(BM_LocateHard)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

}  // namespace
