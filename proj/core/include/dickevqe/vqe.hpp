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
#include <iosfwd>
#include <optional>
#include <vector>

#include "dickevqe/circuit.hpp"
#include "dickevqe/partition.hpp"
#include "dickevqe/problem.hpp"

namespace dickevqe {

/// Mean of the ceil(alpha * K) smallest of K values.
double cvar(std::vector<double> energies, double alpha);

/// Geometric growth from `start` to `cap` over `iterations` steps (start first, cap last).
std::vector<double> geometric_alpha_schedule(double start, double cap, int iterations);

struct CVaRConfig {
    /// One alpha per schedule iteration; must be non-decreasing and in (0, 1].
    std::vector<double> alpha_schedule;
    int shots = 1024;

    void validate() const;
};

/// Per-iteration correlation count (beta), evaluation budget and initial trust radius.
struct CorrelationSchedule {
    std::vector<int> counts;
    std::vector<int> epochs;
    std::vector<double> rho;

    int iterations() const { return static_cast<int>(counts.size()); }
    /// Throws std::invalid_argument for unequal lengths, increasing counts or bad values.
    void validate() const;
};

/// Number of contiguous groups of size beta covering `slots` slots.
int num_groups(int slots, int beta);

/// Broadcasts each logical value to a contiguous run of `beta` slots (the last run may be short).
ParameterVector expand_params(const ParameterVector &logical, int beta, int total_slots);

/// Inverse direction of expand_params: one value per group, the mean of its slots.
ParameterVector group_params(const ParameterVector &physical, int beta);

/// Ratio delta_i and spread sigma_i of the prepared state over level-1 sub-ansatz i.
struct PrincipalComponentMetrics {
    DickeSpec spec{2, 1};
    std::vector<double> thetas;
    /// ratio[t][i] and variance[t][i] for grid point t and sub-ansatz i.
    std::vector<std::vector<double>> ratio;
    std::vector<std::vector<double>> variance;
    /// Basis-state count of each sub-ansatz.
    std::vector<uint64_t> counts;
};

constexpr int kMaxExactQubits = 20;

/// `points` evenly spaced values covering [0, pi].
std::vector<double> theta_grid(int points);

/// Simulates dicke_circuit(spec) with every slot at theta, for each theta in `grid`.
PrincipalComponentMetrics ratio_variance_curves(DickeSpec spec, const std::vector<double> &grid);

/// Identical initial angle favoring sub-ansatz `target`: the argmax of its ratio over the grid
/// points in [pi/2, pi), moved one point toward pi/2 when that point keeps `retention` of the peak.
double close_to_solution_theta(DickeSpec spec, int target, const std::vector<double> &grid,
                               double retention = 0.6);

struct TraceRow {
    int iteration = 0;
    int epoch = 0;
    double alpha = 0.0;
    int beta = 0;
    double expectation = 0.0;
    /// NaN when not recorded.
    double ground_state_probability = 0.0;
    double best_energy = 0.0;
};

struct VqeConfig {
    CVaRConfig cvar;
    CorrelationSchedule schedule;
    double theta_init = 0.0;
    uint64_t seed = 0;
    /// Hard mode restricts the circuit to this sub-ansatz; soft mode runs the full ansatz.
    std::optional<SubAnsatzId> hard_id;
    /// Basis state whose exact probability is traced; omitted when unset.
    std::optional<uint64_t> reference_bits;
};

struct VqeResult {
    uint64_t best_bits = 0;
    double best_energy = 0.0;
    std::vector<TraceRow> trace;
    /// Final physical parameters, one vector per fragment (a single entry in soft mode).
    std::vector<ParameterVector> params;
    int evaluations = 0;
};

/// Iterated trust-region search over correlated parameters. Every evaluation samples the
/// circuit with weight post-selection and scores the samples by CVaR at the scheduled alpha.
/// Each iteration starts from the previous one's best parameters.
VqeResult optimize(const CostModel &model, const VqeConfig &cfg);

/// Ground-state probability of `bits` for the given parameters: exact statevector probability
/// in soft mode, product of fragment probabilities in hard mode.
double state_probability(const CostModel &model, const std::optional<SubAnsatzId> &hard_id,
                         const std::vector<ParameterVector> &params, uint64_t bits);

/// `iteration,epoch,alpha,beta,expectation,ground_state_probability,best_energy` rows.
void write_trace_csv(std::ostream &out, const std::vector<TraceRow> &trace);

struct StudyConfig {
    int n = 16;
    /// Risk-dominant default, so the ground state is not the all-identical-angle limit state.
    double q = 3.0;
    std::vector<double> alphas{0.01, 0.05, 0.1, 0.2};
    /// Empty selects {1, S/4, S/2, S} for S parameter slots.
    std::vector<int> betas;
    int seeds = 20;
    int shots = 4096;
    int epochs = 200;
    double rho = 0.15 * 3.141592653589793;
    uint64_t seed = 7;
    /// Worker threads; seeds are distributed across them. Results do not depend on it.
    int jobs = 1;
};

struct StudyCell {
    double alpha = 0.0;
    int beta = 0;
    int seed_index = 0;
    /// CVaR value of every evaluation.
    std::vector<double> expectations;
    /// Lowest value reached by the end of the run.
    double plateau = 0.0;
    /// First epoch whose running best is within 10% of the total descent from the plateau.
    int convergence_epoch = 0;
};

/// Running-best plateau and convergence epoch of one expectation trace.
std::pair<double, int> plateau_and_convergence(const std::vector<double> &expectations);

/// Alpha x beta grid of single-iteration runs on seeded synthetic portfolios.
std::vector<StudyCell> bounded_cvar_study(const StudyConfig &cfg);

}  // namespace dickevqe
