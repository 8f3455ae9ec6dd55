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

#include "dickevqe/locate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "dickevqe/problem.hpp"
#include "support.hpp"

namespace dickevqe {
namespace {

SubAnsatzId level1(int i) { return SubAnsatzId{{{i}}}; }

/// Restricted exhaustive search: every weight-k state whose level-1 index matches.
std::pair<uint64_t, double> restricted_min(const Qubo &q, const SubAnsatz &sa) {
    uint64_t best = 0;
    double best_e = INFINITY;
    for (uint64_t b = 0; b < (uint64_t{1} << q.n); b++) {
        bool inside = true;
        for (const Fragment &f : sa.fragments) {
            if (popcount((b >> f.offset) & low_mask(f.size)) != f.weight) inside = false;
        }
        if (!inside) continue;
        double e = q.energy(b);
        if (e < best_e) {
            best_e = e;
            best = b;
        }
    }
    return {best, best_e};
}

TEST(SubspaceMin, SingletonCell) {
    Qubo q = testing::random_qubo(8, 1);
    CellMin m = subspace_min(q, resolve(DickeSpec(8, 4), level1(0)));
    EXPECT_EQ(m.bits, 0b00001111u);
    EXPECT_EQ(m.count, 1u);
    EXPECT_DOUBLE_EQ(m.energy, q.energy(0b00001111));
}

TEST(SubspaceMin, MatchesRestrictedExhaustiveSearch) {
    for (uint64_t seed = 0; seed < 6; seed++) {
        Qubo q = testing::random_qubo(12, 40 + seed);
        DickeSpec root(12, 6);
        PartitionTree tree(root, 2);
        for (const SubAnsatzId &id : tree.leaves()) {
            SubAnsatz sa = resolve(root, id);
            CellMin m = subspace_min(q, sa);
            auto [bits, e] = restricted_min(q, sa);
            EXPECT_EQ(m.bits, bits) << format_id(id);
            EXPECT_NEAR(m.energy, e, 1e-12);
            EXPECT_EQ(m.count, subansatz_basis_count(sa));
        }
        for (int i = 0; i <= 6; i++) {
            SubAnsatz sa = resolve(root, level1(i));
            EXPECT_NEAR(subspace_min(q, sa).energy, restricted_min(q, sa).second, 1e-12);
        }
    }
}

TEST(SubspaceMin, TieBreaksTowardSmallerBits) {
    Qubo flat(6);
    CellMin m = subspace_min(flat, resolve(DickeSpec(6, 3), level1(1)));
    EXPECT_EQ(m.bits, 0b001011u);
}

TEST(SubspaceMin, CapIsEnforced) {
    Qubo q(24);
    SubAnsatz sa = resolve(DickeSpec(24, 12), level1(6));
    EXPECT_THROW(subspace_min(q, sa, 1000), CapExceeded);
    try {
        subspace_min(q, sa, 1000);
    } catch (const CapExceeded &e) {
        EXPECT_EQ(e.count(), binomial(12, 6) * binomial(12, 6));
    }
}

TEST(SubspaceMin, MuOnlyRightmostCellHoldsTheMinimum) {
    PortfolioProblem p = reorder(synth_assets(12, 5), ReorderKey::ByReturn).first;
    CostModel m = make_cost_model(p, CostMode::ReturnOnly);
    CellMin right = subspace_min(m.qubo, resolve(DickeSpec(12, 6), level1(6)));
    EXPECT_EQ(right.bits, brute_force_min(m).bits);
}

TEST(Interpolate, SymmetricPoints) {
    EnergyCurve c = interpolate_convex({{3, 4.0}, {4, 1.0}, {5, 0.0}, {6, 1.0}, {7, 4.0}});
    EXPECT_EQ(c.argmin, 5);
    EXPECT_FALSE(c.hull_fallback);
    EXPECT_NEAR(c.a, 1.0, 1e-12);
    EXPECT_NEAR(c.value_at(5), 0.0, 1e-12);
}

TEST(Interpolate, DecreasingLineUsesHull) {
    EnergyCurve c = interpolate_convex({{1, 3.0}, {2, 2.0}, {7, -3.0}, {8, -4.0}});
    EXPECT_TRUE(c.hull_fallback);
    EXPECT_EQ(c.argmin, 8);
}

TEST(Interpolate, HalfwayRoundsRight) {
    EnergyCurve c = interpolate_convex({{1, 1.0}, {2, 0.0}, {3, 0.0}, {4, 1.0}});
    EXPECT_EQ(c.argmin, 3);
}

TEST(Interpolate, ClampsToPointRange) {
    EnergyCurve c = interpolate_convex({{1, 10.0}, {2, 6.0}, {3, 3.0}, {4, 1.0}});
    EXPECT_LE(c.argmin, 4);
    EXPECT_GE(c.argmin, 1);
}

TEST(Interpolate, FlatCurveIsDegenerate) {
    EnergyCurve c = interpolate_convex({{1, 0.5}, {2, 0.5}, {5, 0.5}, {6, 0.5}});
    EXPECT_TRUE(c.degenerate);
    EXPECT_EQ(c.argmin, 6);
}

TEST(Interpolate, RejectsBadInput) {
    EXPECT_THROW(interpolate_convex({{1, 0.0}, {2, 1.0}}), std::invalid_argument);
    EXPECT_THROW(interpolate_convex({{1, 0.0}, {2, 1.0}, {2, 3.0}}), std::invalid_argument);
}

TEST(Interpolate, SortsPointsAndFlagsResidual) {
    EnergyCurve c = interpolate_convex({{4, 0.0}, {1, 0.0}, {2, 1.0}, {3, 0.0}});
    EXPECT_TRUE(std::is_sorted(c.points.begin(), c.points.end(),
                               [](const CurvePoint &a, const CurvePoint &b) { return a.index < b.index; }));
    EXPECT_TRUE(c.large_residual);
}

TEST(OuterIndices, Shapes) {
    EXPECT_EQ(outer_indices(20), (std::vector<int>{1, 2, 18, 19}));
    EXPECT_EQ(outer_indices(6), (std::vector<int>{1, 2, 4, 5}));
    EXPECT_EQ(outer_indices(4), (std::vector<int>{1, 2, 3}));
    EXPECT_EQ(outer_indices(2), (std::vector<int>{0, 1, 2}));
}

TEST(Cruciform, StartAtMinimumStops) {
    int calls = 0;
    auto oracle = [&](int r, int c) {
        calls++;
        return std::pow(r - 2, 2) + std::pow(c - 3, 2);
    };
    CruciformResult res = cruciform_greedy(6, 6, oracle, 2, 3, 10);
    EXPECT_EQ(res.cell, (std::vector<int>{2, 3}));
    EXPECT_EQ(res.evaluations, 5);
    EXPECT_EQ(calls, 5);
    EXPECT_FALSE(res.budget_exhausted);
}

TEST(Cruciform, MigratesOnceToAdjacentMinimum) {
    double grid[6][6];
    for (int r = 0; r < 6; r++) {
        for (int c = 0; c < 6; c++) grid[r][c] = 0.1 * (std::abs(r - 4) + std::abs(c - 5)) - 0.6023;
    }
    CruciformResult res = cruciform_greedy(6, 6, [&](int r, int c) { return grid[r][c]; }, 4, 4, 10);
    EXPECT_EQ(res.cell, (std::vector<int>{4, 5}));
    EXPECT_EQ(res.trace.size(), 2u);
    EXPECT_DOUBLE_EQ(res.energy, -0.6023);
}

TEST(Cruciform, CorridorEconomy) {
    // Energy decreases along row 0 only; every other cell is high.
    auto oracle = [](int r, int c) { return r == 0 ? -static_cast<double>(c) : 100.0; };
    CruciformResult res = cruciform_greedy(5, 8, oracle, 0, 0, 20);
    EXPECT_EQ(res.cell, (std::vector<int>{0, 7}));
    int steps = static_cast<int>(res.trace.size());
    EXPECT_LE(res.evaluations, 5 + 3 * (steps - 1));
    for (size_t i = 1; i < res.trace.size(); i++) EXPECT_LT(res.trace[i].second, res.trace[i - 1].second);
}

TEST(Cruciform, BudgetExhaustionIsFlagged) {
    auto oracle = [](int, int c) { return -static_cast<double>(c); };
    CruciformResult res = cruciform_greedy(1, 10, oracle, 0, 0, 3);
    EXPECT_TRUE(res.budget_exhausted);
    EXPECT_EQ(res.cell, (std::vector<int>{0, 3}));
}

TEST(Cruciform, KnownCellsAreNotReevaluated) {
    int calls = 0;
    GridOracle oracle = [&](const std::vector<int> &c) {
        calls++;
        return static_cast<double>(c[0] + c[1]);
    };
    std::map<std::vector<int>, double> known{{{1, 1}, 2.0}, {{0, 1}, 1.0}};
    CruciformResult res = cruciform_greedy({3, 3}, oracle, {1, 1}, 5, known);
    EXPECT_EQ(res.cell, (std::vector<int>{0, 0}));
    EXPECT_LE(calls, res.evaluations);
}

TEST(Greedy, StartAtMinimumReturnsStart) {
    Qubo q = testing::random_qubo(10, 3);
    auto [best, e] = testing::exhaustive_min(q, 5);
    GreedyResult r = greedy_bitstring(q, best);
    EXPECT_EQ(r.bits, best);
    EXPECT_EQ(r.trace.size(), 1u);
}

TEST(Greedy, LinearCostSorts) {
    PortfolioProblem p = reorder(synth_assets(12, 8), ReorderKey::ByReturn).first;
    Qubo q = to_qubo(p, CostMode::ReturnOnly);
    for (uint64_t start : {0b000000111111ULL, 0b101010101010ULL, 0b010101010101ULL}) {
        EXPECT_EQ(BasisState(12, greedy_bitstring(q, start).bits).to_string(), "111111000000");
    }
}

TEST(Greedy, DescentNeverWorsens) {
    for (uint64_t seed = 0; seed < 30; seed++) {
        Qubo q = testing::random_qubo(12, 500 + seed);
        std::mt19937_64 rng(seed);
        uint64_t start = 0;
        while (popcount(start) < 6) start |= uint64_t{1} << (rng() % 12);
        GreedyOptions opts;
        opts.restarts = 3;
        opts.seed = seed;
        GreedyResult r = greedy_bitstring(q, start, opts);
        EXPECT_LE(r.energy, q.energy(start));
        EXPECT_EQ(popcount(r.bits), 6);
        for (size_t i = 1; i < r.trace.size(); i++) EXPECT_LT(r.trace[i].second, r.trace[i - 1].second);
    }
}

TEST(Greedy, GroupsKeepFragmentWeights) {
    Qubo q = testing::random_qubo(8, 9);
    GreedyOptions opts;
    opts.groups = {Fragment{4, 4, 1}, Fragment{0, 4, 3}};
    GreedyResult r = greedy_bitstring(q, 0b00010111, opts);
    EXPECT_EQ(popcount(r.bits >> 4), 1);
    EXPECT_EQ(popcount(r.bits & 15), 3);
}

TEST(LocateSoft, MuOnlyTargetsTheRight) {
    PortfolioProblem p = reorder(synth_assets(12, 21), ReorderKey::ByReturn).first;
    LocateReport rep = locate_soft(make_cost_model(p, CostMode::ReturnOnly));
    EXPECT_FALSE(rep.reversed);
    EXPECT_GE(rep.target_index, 4);
}

TEST(LocateSoft, LeftBiasedInstanceIsReversed) {
    PortfolioProblem p = synth_assets(12, 21);
    auto [sorted, perm] = reorder(p, ReorderKey::ByReturn);
    PortfolioProblem desc = reverse_assets(sorted).first;
    LocateReport rep = locate_soft(make_cost_model(desc, CostMode::ReturnOnly));
    EXPECT_TRUE(rep.reversed);
    EXPECT_GT(2 * rep.target_index, 6);
    EXPECT_EQ(rep.curves.size(), 2u);
}

TEST(LocateSoft, CostlessInstanceIsDegenerate) {
    PortfolioProblem p = make_portfolio(SquareMatrix(8), std::vector<double>(8, 0.0), 1.0, 4);
    LocateReport rep = locate_soft(make_cost_model(p));
    EXPECT_TRUE(rep.degenerate);
    EXPECT_EQ(rep.target_index, 3);
    EXPECT_FALSE(rep.reversed);
}

TEST(LocateSoft, RejectsOddRegister) {
    PortfolioProblem p = make_portfolio(SquareMatrix(7), std::vector<double>(7, 0.0), 1.0, 3);
    EXPECT_THROW(locate_soft(make_cost_model(p)), std::invalid_argument);
}

TEST(LocateHard, DepthOneUsesAtMostFiveCells) {
    PortfolioProblem p = reorder(synth_assets(16, 3), ReorderKey::ByReturn).first;
    LocateReport rep = locate_hard(make_cost_model(p), 1);
    EXPECT_LE(rep.trail.size(), 5u);
    EXPECT_EQ(rep.predicted.depth(), 1);
    EXPECT_EQ(rep.predicted.levels[0][0], rep.target_index);
}

TEST(LocateHard, TrailEnergiesAreTrueMinima) {
    PortfolioProblem p = reorder(synth_assets(12, 4), ReorderKey::ByReturn).first;
    CostModel m = make_cost_model(p);
    LocateReport rep = locate_hard(m, 2);
    for (const TrailEntry &t : rep.trail) {
        EXPECT_FALSE(t.approximate);
        EXPECT_NEAR(t.energy, subspace_min(m.qubo, resolve(DickeSpec(12, 6), t.id)).energy, 1e-15);
    }
    EXPECT_EQ(rep.predicted.depth(), 2);
    EXPECT_TRUE(in_subansatz(resolve(DickeSpec(12, 6), rep.predicted), rep.candidate_bits));
    nlohmann::json j = to_json(rep);
    EXPECT_EQ(j["predicted"], format_id(rep.predicted));
}

TEST(LocateHard, ApproximateCellsAreFlagged) {
    PortfolioProblem p = reorder(synth_assets(16, 3), ReorderKey::ByReturn).first;
    LocateOptions opts;
    opts.cell_cap = 100;
    LocateReport rep = locate_hard(make_cost_model(p), 2, opts);
    EXPECT_TRUE(rep.approximate);
}

TEST(LocateHard, HybridDominatesLocateOnly) {
    int locate_hits = 0, hybrid_hits = 0;
    for (uint64_t seed = 0; seed < 20; seed++) {
        PortfolioProblem p = reorder(synth_assets(12, 300 + seed), ReorderKey::ByReturn).first;
        CostModel m = make_cost_model(p);
        CellMin exact = brute_force_min(m);
        LocateReport rep = locate_hard(m, 2);
        GreedyResult g = greedy_bitstring(m.qubo, rep.candidate_bits);
        EXPECT_LE(g.energy, rep.candidate_energy + 1e-12);
        locate_hits += rep.candidate_bits == exact.bits;
        hybrid_hits += g.bits == exact.bits;
    }
    EXPECT_GE(hybrid_hits, locate_hits);
}

TEST(LocateSoft, InterpolationAccuracyIsRecorded) {
    // Measured rather than assumed; the floor only guards against a broken fit.
    int hits = 0, near = 0;
    const int trials = 200;
    for (uint64_t seed = 0; seed < trials; seed++) {
        PortfolioProblem p = reorder(synth_assets(16, 7000 + seed), ReorderKey::ByReturn).first;
        CostModel m = make_cost_model(p);
        DickeSpec root(16, 8);
        CellEvaluator ev(m.qubo, root, kDefaultCellCap);
        std::vector<CurvePoint> pts;
        for (int i : outer_indices(8)) pts.push_back({i, ev.evaluate(level1(i)).energy});
        int true_index = level1_index(BasisState(16, brute_force_min(m).bits));
        int predicted = interpolate_convex(pts).argmin;
        hits += predicted == true_index;
        near += std::abs(predicted - true_index) <= 1;
    }
    double rate = static_cast<double>(hits) / trials;
    double near_rate = static_cast<double>(near) / trials;
    RecordProperty("interpolation_hit_rate", std::to_string(rate));
    RecordProperty("interpolation_within_one_rate", std::to_string(near_rate));
    std::printf("outer-four interpolation on D^16_8: exact %.3f, within one %.3f\n", rate, near_rate);
    EXPECT_GE(rate, 0.2);
    EXPECT_GE(near_rate, 0.9);
}

}  // namespace
}  // namespace dickevqe
