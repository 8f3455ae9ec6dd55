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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dickevqe/basis.hpp"
#include "dickevqe/qubo.hpp"

namespace dickevqe {

/// Which terms of q x^T A x - mu^T x are kept.
enum class CostMode { Full, CovarianceOnly, ReturnOnly };

const char *cost_mode_name(CostMode m);
CostMode parse_cost_mode(const std::string &text);

/// Budget-constrained portfolio with unit prices. Asset j of this instance is asset
/// `permutation[j]` of the data it was built from.
struct PortfolioProblem {
    int n = 0;
    double q = 0.9;
    SquareMatrix A;
    std::vector<double> mu;
    int budget = 0;
    std::vector<int> permutation;

    /// Throws std::invalid_argument on shape errors, asymmetry above 1e-9 or a bad budget.
    void validate() const;
};

/// Builds a problem with the identity permutation and validates it.
PortfolioProblem make_portfolio(SquareMatrix A, std::vector<double> mu, double q, int budget);

/// q x^T A x - mu^T x (or one of its parts). Throws if HW(x) differs from the budget.
double cost_binary(const PortfolioProblem &p, const BasisState &x, CostMode mode = CostMode::Full);

Qubo to_qubo(const PortfolioProblem &p, CostMode mode = CostMode::Full);

/// Spin form q' z^T A z - mu'^T z with z_i = 1 - 2 x_i.
struct IsingModel {
    int n = 0;
    double q_prime = 0.0;
    SquareMatrix A;
    std::vector<double> mu_prime;
    double constant = 0.0;

    /// Spin-form energy of the bitstring, without the constant.
    double energy(uint64_t bits) const;
};

IsingModel to_ising(const PortfolioProblem &p);

enum class ReorderKey { ByVariance, ByReturn };

ReorderKey parse_reorder_key(const std::string &text);

/// Applies a relabeling: asset j of the result is asset perm[j] of `p`.
PortfolioProblem permute(const PortfolioProblem &p, const std::vector<int> &perm);

/// Stable ascending sort by diag(A) or by mu. Returns the sorted problem and the permutation used.
std::pair<PortfolioProblem, std::vector<int>> reorder(const PortfolioProblem &p, ReorderKey key);
std::pair<PortfolioProblem, std::vector<int>> reverse_assets(const PortfolioProblem &p);

/// Weighted graph whose balanced cut is sought.
struct BisectionProblem {
    int n = 0;
    SquareMatrix weights;
    double offset = 0.0;
    bool fixed_top_bit = true;
    std::vector<int> permutation;

    void validate() const;
    int num_edges() const;
};

/// Cut weight plus offset. Throws unless HW(x) = n/2 and, when fixed, the top bit is set.
double cost_bisection(const BisectionProblem &b, const BasisState &x);

Qubo to_qubo(const BisectionProblem &b);

/// Stable ascending sort of nodes by weighted degree (the Laplacian diagonal).
std::pair<BisectionProblem, std::vector<int>> reorder_by_laplacian(const BisectionProblem &b);

/// The cost a solver actually sees: a QUBO restricted to one Hamming weight. When
/// `pinned_top` is set, the model lives on n-1 bits and the full state carries an
/// extra 1 on top.
struct CostModel {
    Qubo qubo;
    int weight = 0;
    bool pinned_top = false;

    int num_qubits() const { return qubo.n; }
    double energy(uint64_t bits) const { return qubo.energy(bits); }
    /// Full-register bitstring for a model bitstring.
    uint64_t expand(uint64_t bits) const;
    int full_width() const { return pinned_top ? qubo.n + 1 : qubo.n; }
};

CostModel make_cost_model(const PortfolioProblem &p, CostMode mode = CostMode::Full);
CostModel make_cost_model(const BisectionProblem &b);

/// Closing prices, one row per date.
struct PriceTable {
    std::vector<std::string> dates;
    std::vector<std::vector<double>> prices;

    int num_assets() const { return prices.empty() ? 0 : static_cast<int>(prices.front().size()); }
};

PriceTable read_prices_csv(std::istream &in);
PriceTable read_prices_csv_file(const std::string &path);
void write_prices_csv(std::ostream &out, const PriceTable &table);

/// Simple daily returns, their mean as mu and their sample covariance (divisor T-1) as A.
PortfolioProblem problem_from_prices(const PriceTable &table, double q, int budget);
PortfolioProblem ingest_csv(const std::string &path, double q, int budget);

/// One-factor geometric price paths over `num_days` closes.
PriceTable synth_prices(int n, uint64_t seed, int num_days = 40);
/// synth_prices followed by the ingest pipeline. `budget` < 0 means n/2.
PortfolioProblem synth_assets(int n, uint64_t seed, double q = 0.9, int budget = -1);

/// synth_assets with a bonus added to the returns of a random `budget`-subset, large
/// enough that the subset is provably the unique minimizer.
struct PlantedInstance {
    PortfolioProblem problem;
    uint64_t planted_bits = 0;
};
PlantedInstance synth_planted(int n, int budget, uint64_t seed, double q = 0.9);

/// Each pair i<j (in order) gets an edge with probability p_edge; weights are uniform in (0, 1).
BisectionProblem synth_graph(int n, double p_edge, uint64_t seed_graph, uint64_t seed_weights, double offset = 0.0,
                             bool fixed_top_bit = true);

nlohmann::json to_json(const PortfolioProblem &p);
PortfolioProblem portfolio_from_json(const nlohmann::json &j);

/// Edge list: header `n <nodes> offset <value> fixed_top_bit <0|1>`, then `u v w` lines.
void write_edge_list(std::ostream &out, const BisectionProblem &b);
BisectionProblem read_edge_list(std::istream &in);

}  // namespace dickevqe
