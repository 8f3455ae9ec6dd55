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
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "dickevqe/partition.hpp"
#include "dickevqe/problem.hpp"

namespace dickevqe {

constexpr uint64_t kDefaultCellCap = 10'000'000;

/// Thrown when a sub-ansatz holds more basis states than the enumeration cap.
class CapExceeded : public std::runtime_error {
   public:
    CapExceeded(const std::string &what, uint64_t count) : std::runtime_error(what), count_(count) {}
    uint64_t count() const { return count_; }

   private:
    uint64_t count_;
};

struct CellMin {
    uint64_t bits = 0;
    double energy = 0.0;
    /// Number of basis states examined.
    uint64_t count = 0;
};

/// Number of basis states in `sa`, saturating at UINT64_MAX.
uint64_t saturating_basis_count(const SubAnsatz &sa);

/// Exact minimum of the QUBO over every basis state of `sa`. Ties go to the smaller bitstring.
/// The sub-ansatz root must have as many qubits as the QUBO has variables.
CellMin subspace_min(const Qubo &cost, const SubAnsatz &sa, uint64_t cap = kDefaultCellCap);

/// Exact minimum over all states of weight `model.weight`.
CellMin brute_force_min(const CostModel &model, uint64_t cap = kDefaultCellCap);

/// True when `bits` is one of the basis states of `sa`.
bool in_subansatz(const SubAnsatz &sa, uint64_t bits);

struct CurvePoint {
    int index = 0;
    double energy = 0.0;
};

/// Convex fit through sub-ansatz minima.
struct EnergyCurve {
    std::vector<CurvePoint> points;
    /// energy ~ a i^2 + b i + c; unused when hull_fallback is set.
    double a = 0.0, b = 0.0, c = 0.0;
    bool hull_fallback = false;
    bool degenerate = false;
    bool large_residual = false;
    double rms_residual = 0.0;
    int argmin = 0;

    /// Value of the fit (or of the hull polyline) at x.
    double value_at(double x) const;
};

/// Least-squares quadratic; falls back to the lower convex hull when the leading coefficient
/// is below 1e-12. The argmin is clamped to the point range and rounded, halves going up.
/// Throws std::invalid_argument for fewer than 3 points or duplicate indices.
EnergyCurve interpolate_convex(std::vector<CurvePoint> points);

/// {1, 2, m-2, m-1} over indices 0..m, or all of 0..m when that leaves fewer than 3.
std::vector<int> outer_indices(int m);

struct CruciformResult {
    std::vector<int> cell;
    double energy = 0.0;
    /// Visited cells with strictly decreasing energy, start first.
    std::vector<std::pair<std::vector<int>, double>> trace;
    int evaluations = 0;
    bool budget_exhausted = false;
};

using GridOracle = std::function<double(const std::vector<int> &)>;

/// Descent over a rectangular grid of any dimension. Each iteration evaluates the unvisited
/// neighbors at distance 1 and moves to the strict minimum; every cell is evaluated at most once.
/// `known` pre-seeds the cache with already-evaluated cells.
CruciformResult cruciform_greedy(const std::vector<int> &shape, const GridOracle &oracle, std::vector<int> start,
                                 int max_iters, const std::map<std::vector<int>, double> &known = {});

/// Two-dimensional convenience form.
CruciformResult cruciform_greedy(int rows, int cols, const std::function<double(int, int)> &oracle, int row, int col,
                                 int max_iters);

struct GreedyOptions {
    int restarts = 0;
    uint64_t seed = 0;
    /// When set, swaps stay inside these fragments (keeps a sub-ansatz's weights).
    std::vector<Fragment> groups;
    int max_steps = 100000;
};

struct GreedyResult {
    uint64_t bits = 0;
    double energy = 0.0;
    /// Accepted states of the winning descent, start first.
    std::vector<std::pair<uint64_t, double>> trace;
    int starts = 1;
};

/// Steepest descent over one-for-one bit swaps. Ties prefer the smaller resulting bitstring.
/// Restarts begin from seeded random swaps of `start`.
GreedyResult greedy_bitstring(const Qubo &cost, uint64_t start, const GreedyOptions &opts = {});

struct TrailEntry {
    SubAnsatzId id;
    uint64_t bits = 0;
    double energy = 0.0;
    /// Set when the cell was over the cap and `energy` comes from restricted greedy search.
    bool approximate = false;
};

struct LocateOptions {
    uint64_t cell_cap = kDefaultCellCap;
    /// Cruciform budget; 0 selects ceil(log2 n).
    int cruciform_iters = 0;
};

struct LocateReport {
    DickeSpec root{1, 0};
    SubAnsatzId predicted;
    uint64_t candidate_bits = 0;
    double candidate_energy = 0.0;
    std::vector<TrailEntry> trail;
    std::vector<EnergyCurve> curves;
    std::vector<CruciformResult> cruciform;
    /// Level-1 target index (soft mode).
    int target_index = 0;
    bool reversed = false;
    bool degenerate = false;
    bool large_residual = false;
    bool approximate = false;
    bool budget_exhausted = false;
    bool possible_misestimation = false;
};

/// Memoizing cell evaluator shared by the locate procedures.
class CellEvaluator {
   public:
    CellEvaluator(const Qubo &cost, DickeSpec root, uint64_t cap);

    const TrailEntry &evaluate(const SubAnsatzId &id);
    const std::vector<TrailEntry> &trail() const { return trail_; }
    bool any_approximate() const { return approximate_; }

   private:
    const Qubo &cost_;
    DickeSpec root_;
    uint64_t cap_;
    std::map<SubAnsatzId, size_t> index_;
    std::vector<TrailEntry> trail_;
    bool approximate_ = false;
};

/// Outer-four interpolation over the level-1 sub-ansatze. When the argmin lands in the left
/// half the register is reversed and the interpolation repeated; `reversed` reports it and
/// `target_index` refers to the reversed problem in that case.
LocateReport locate_soft(const CostModel &model, const LocateOptions &opts = {});

/// Recursive locate to depth p: level 1 by interpolation, deeper levels by interpolating the
/// main diagonal of the child grid and then cruciform descent.
LocateReport locate_hard(const CostModel &model, int depth, const LocateOptions &opts = {});

/// The QUBO with its variables in reverse order.
Qubo reversed(const Qubo &q);
uint64_t reverse_bits(uint64_t bits, int n);

nlohmann::json to_json(const EnergyCurve &curve);
nlohmann::json to_json(const LocateReport &report);

}  // namespace dickevqe
