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

#include "dickevqe/problem.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dickevqe/random.hpp"

namespace dickevqe {

namespace {

std::vector<int> identity_perm(int n) {
    std::vector<int> p(static_cast<size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    return p;
}

void check_symmetric(const SquareMatrix &m, const char *what) {
    for (int i = 0; i < m.size(); i++) {
        for (int j = i + 1; j < m.size(); j++) {
            if (std::abs(m(i, j) - m(j, i)) > 1e-9) {
                throw std::invalid_argument(std::string(what) + " is not symmetric at (" + std::to_string(i) + ", " +
                                            std::to_string(j) + ")");
            }
        }
    }
}

void check_permutation(const std::vector<int> &perm, int n) {
    if (perm.size() != static_cast<size_t>(n)) {
        throw std::invalid_argument("permutation has the wrong length");
    }
    std::vector<bool> seen(static_cast<size_t>(n), false);
    for (int v : perm) {
        if (v < 0 || v >= n || seen[static_cast<size_t>(v)]) {
            throw std::invalid_argument("not a permutation");
        }
        seen[static_cast<size_t>(v)] = true;
    }
}

SquareMatrix permute_matrix(const SquareMatrix &m, const std::vector<int> &perm) {
    int n = m.size();
    SquareMatrix out(n);
    for (int a = 0; a < n; a++) {
        for (int b = 0; b < n; b++) {
            out(a, b) = m(perm[a], perm[b]);
        }
    }
    return out;
}

std::vector<int> compose(const std::vector<int> &outer, const std::vector<int> &inner) {
    // Element j of the result refers to what `inner` calls outer[j].
    std::vector<int> out(outer.size());
    for (size_t j = 0; j < outer.size(); j++) {
        out[j] = inner[static_cast<size_t>(outer[j])];
    }
    return out;
}

std::vector<int> stable_argsort(const std::vector<double> &key) {
    auto perm = identity_perm(static_cast<int>(key.size()));
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return key[a] < key[b]; });
    return perm;
}

}  // namespace

const char *cost_mode_name(CostMode m) {
    switch (m) {
        case CostMode::Full:
            return "full";
        case CostMode::CovarianceOnly:
            return "covariance";
        case CostMode::ReturnOnly:
            return "return";
    }
    return "?";
}

CostMode parse_cost_mode(const std::string &text) {
    if (text == "full") return CostMode::Full;
    if (text == "covariance") return CostMode::CovarianceOnly;
    if (text == "return") return CostMode::ReturnOnly;
    throw std::invalid_argument("unknown cost mode '" + text + "' (expected full, covariance or return)");
}

void PortfolioProblem::validate() const {
    if (n < 1) {
        throw std::invalid_argument("portfolio needs at least one asset");
    }
    if (A.size() != n || mu.size() != static_cast<size_t>(n)) {
        throw std::invalid_argument("covariance or return vector does not match the asset count");
    }
    if (budget < 0 || budget > n) {
        throw std::invalid_argument("budget must lie in [0, n]");
    }
    if (!(q > 0.0)) {
        throw std::invalid_argument("risk level q must be positive");
    }
    check_symmetric(A, "covariance matrix");
    check_permutation(permutation, n);
}

PortfolioProblem make_portfolio(SquareMatrix A, std::vector<double> mu, double q, int budget) {
    PortfolioProblem p;
    p.n = A.size();
    p.q = q;
    p.A = std::move(A);
    p.mu = std::move(mu);
    p.budget = budget;
    p.permutation = identity_perm(p.n);
    p.validate();
    return p;
}

double cost_binary(const PortfolioProblem &p, const BasisState &x, CostMode mode) {
    if (x.num_qubits() != p.n) {
        throw std::invalid_argument("bitstring width does not match the asset count");
    }
    if (x.hamming_weight() != p.budget) {
        throw std::invalid_argument("bitstring weight " + std::to_string(x.hamming_weight()) +
                                    " violates the budget " + std::to_string(p.budget));
    }
    return to_qubo(p, mode).energy(x.bits());
}

Qubo to_qubo(const PortfolioProblem &p, CostMode mode) {
    Qubo out(p.n);
    bool risk = mode != CostMode::ReturnOnly;
    bool ret = mode != CostMode::CovarianceOnly;
    double scale = mode == CostMode::Full ? p.q : 1.0;
    for (int i = 0; i < p.n; i++) {
        double h = 0.0;
        if (risk) h += scale * p.A(i, i);
        if (ret) h -= p.mu[static_cast<size_t>(i)];
        out.linear[static_cast<size_t>(i)] = h;
        if (risk) {
            for (int j = i + 1; j < p.n; j++) {
                out.add_coupling(i, j, scale * (p.A(i, j) + p.A(j, i)));
            }
        }
    }
    return out;
}

double IsingModel::energy(uint64_t bits) const {
    std::vector<double> z(static_cast<size_t>(n));
    for (int i = 0; i < n; i++) {
        z[static_cast<size_t>(i)] = ((bits >> i) & 1u) ? -1.0 : 1.0;
    }
    double quad = 0.0;
    double lin = 0.0;
    for (int i = 0; i < n; i++) {
        double row = 0.0;
        for (int j = 0; j < n; j++) {
            row += A(i, j) * z[static_cast<size_t>(j)];
        }
        quad += z[static_cast<size_t>(i)] * row;
        lin += mu_prime[static_cast<size_t>(i)] * z[static_cast<size_t>(i)];
    }
    return q_prime * quad - lin;
}

IsingModel to_ising(const PortfolioProblem &p) {
    IsingModel m;
    m.n = p.n;
    m.q_prime = p.q / 4.0;
    m.A = p.A;
    m.mu_prime.assign(static_cast<size_t>(p.n), 0.0);
    double total_a = 0.0;
    double total_mu = 0.0;
    for (int i = 0; i < p.n; i++) {
        double row = 0.0;
        for (int j = 0; j < p.n; j++) {
            row += p.A(i, j);
        }
        total_a += row;
        total_mu += p.mu[static_cast<size_t>(i)];
        m.mu_prime[static_cast<size_t>(i)] = 0.5 * (p.q * row - p.mu[static_cast<size_t>(i)]);
    }
    m.constant = p.q / 4.0 * total_a - 0.5 * total_mu;
    return m;
}

ReorderKey parse_reorder_key(const std::string &text) {
    if (text == "variance") return ReorderKey::ByVariance;
    if (text == "return") return ReorderKey::ByReturn;
    throw std::invalid_argument("unknown reorder key '" + text + "' (expected variance or return)");
}

PortfolioProblem permute(const PortfolioProblem &p, const std::vector<int> &perm) {
    check_permutation(perm, p.n);
    PortfolioProblem out = p;
    out.A = permute_matrix(p.A, perm);
    for (int j = 0; j < p.n; j++) {
        out.mu[static_cast<size_t>(j)] = p.mu[static_cast<size_t>(perm[j])];
    }
    out.permutation = compose(perm, p.permutation);
    return out;
}

std::pair<PortfolioProblem, std::vector<int>> reorder(const PortfolioProblem &p, ReorderKey key) {
    std::vector<double> k(static_cast<size_t>(p.n));
    for (int i = 0; i < p.n; i++) {
        k[static_cast<size_t>(i)] = key == ReorderKey::ByVariance ? p.A(i, i) : p.mu[static_cast<size_t>(i)];
    }
    auto perm = stable_argsort(k);
    return {permute(p, perm), perm};
}

std::pair<PortfolioProblem, std::vector<int>> reverse_assets(const PortfolioProblem &p) {
    auto perm = identity_perm(p.n);
    std::reverse(perm.begin(), perm.end());
    return {permute(p, perm), perm};
}

void BisectionProblem::validate() const {
    if (n < 2 || n % 2 != 0) {
        throw std::invalid_argument("bisection needs an even node count of at least 2");
    }
    if (weights.size() != n) {
        throw std::invalid_argument("weight matrix does not match the node count");
    }
    for (int i = 0; i < n; i++) {
        if (weights(i, i) != 0.0) {
            throw std::invalid_argument("weight matrix has a nonzero diagonal");
        }
    }
    check_symmetric(weights, "weight matrix");
    check_permutation(permutation, n);
}

int BisectionProblem::num_edges() const {
    int count = 0;
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            count += weights(i, j) != 0.0;
        }
    }
    return count;
}

double cost_bisection(const BisectionProblem &b, const BasisState &x) {
    if (x.num_qubits() != b.n) {
        throw std::invalid_argument("bitstring width does not match the node count");
    }
    if (x.hamming_weight() != b.n / 2) {
        throw std::invalid_argument("bisection bitstring must have weight n/2");
    }
    if (b.fixed_top_bit && !x.bit(b.n - 1)) {
        throw std::invalid_argument("bisection bitstring must have its top bit set");
    }
    double cut = b.offset;
    for (int i = 0; i < b.n; i++) {
        for (int j = i + 1; j < b.n; j++) {
            if (x.bit(i) != x.bit(j)) {
                cut += b.weights(i, j);
            }
        }
    }
    return cut;
}

Qubo to_qubo(const BisectionProblem &b) {
    // x_i XOR x_j = x_i + x_j - 2 x_i x_j.
    Qubo out(b.n);
    out.constant = b.offset;
    for (int i = 0; i < b.n; i++) {
        for (int j = 0; j < b.n; j++) {
            out.linear[static_cast<size_t>(i)] += b.weights(i, j);
        }
        for (int j = i + 1; j < b.n; j++) {
            if (b.weights(i, j) != 0.0) {
                out.add_coupling(i, j, -2.0 * b.weights(i, j));
            }
        }
    }
    return out;
}

std::pair<BisectionProblem, std::vector<int>> reorder_by_laplacian(const BisectionProblem &b) {
    std::vector<double> degree(static_cast<size_t>(b.n), 0.0);
    for (int i = 0; i < b.n; i++) {
        for (int j = 0; j < b.n; j++) {
            degree[static_cast<size_t>(i)] += b.weights(i, j);
        }
    }
    auto perm = stable_argsort(degree);
    BisectionProblem out = b;
    out.weights = permute_matrix(b.weights, perm);
    out.permutation = compose(perm, b.permutation);
    return {out, perm};
}

uint64_t CostModel::expand(uint64_t bits) const {
    return pinned_top ? bits | (uint64_t{1} << qubo.n) : bits;
}

CostModel make_cost_model(const PortfolioProblem &p, CostMode mode) {
    CostModel m;
    m.qubo = to_qubo(p, mode);
    m.weight = p.budget;
    return m;
}

CostModel make_cost_model(const BisectionProblem &b) {
    b.validate();
    CostModel m;
    m.qubo = to_qubo(b);
    m.weight = b.n / 2;
    if (b.fixed_top_bit) {
        m.qubo = pin_top_bit(m.qubo, true);
        m.weight -= 1;
        m.pinned_top = true;
    }
    return m;
}

namespace {

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        size_t start = cell.find_first_not_of(' ');
        cells.push_back(start == std::string::npos ? std::string() : cell.substr(start));
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

}  // namespace

PriceTable read_prices_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("price CSV is empty");
    }
    auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "date") {
        throw std::runtime_error("price CSV header must start with 'date' followed by asset columns");
    }
    size_t width = header.size() - 1;
    PriceTable table;
    int line_no = 1;
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " cells, got " + std::to_string(cells.size()));
        }
        if (!table.dates.empty() && !(table.dates.back() < cells[0])) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": dates must be strictly increasing");
        }
        std::vector<double> row(width);
        for (size_t c = 0; c < width; c++) {
            const std::string &cell = cells[c + 1];
            if (cell.empty()) {
                throw std::runtime_error("line " + std::to_string(line_no) + ": missing value in column '" +
                                         header[c + 1] + "'");
            }
            size_t used = 0;
            double v;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception &) {
                used = 0;
            }
            if (used != cell.size() || !std::isfinite(v)) {
                throw std::runtime_error("line " + std::to_string(line_no) + ": non-numeric cell '" + cell + "'");
            }
            row[c] = v;
        }
        table.dates.push_back(cells[0]);
        table.prices.push_back(std::move(row));
    }
    if (table.prices.size() < 3) {
        throw std::runtime_error("price CSV needs at least 3 rows of data");
    }
    return table;
}

PriceTable read_prices_csv_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open price file '" + path + "'");
    }
    return read_prices_csv(in);
}

void write_prices_csv(std::ostream &out, const PriceTable &table) {
    out << "date";
    for (int a = 0; a < table.num_assets(); a++) {
        out << ",asset_" << a;
    }
    out << '\n';
    char buf[32];
    for (size_t t = 0; t < table.prices.size(); t++) {
        out << table.dates[t];
        for (double v : table.prices[t]) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << ',' << buf;
        }
        out << '\n';
    }
}

PortfolioProblem problem_from_prices(const PriceTable &table, double q, int budget) {
    size_t rows = table.prices.size();
    if (rows < 3) {
        throw std::invalid_argument("need at least 3 price rows");
    }
    int n = table.num_assets();
    size_t T = rows - 1;
    std::vector<std::vector<double>> r(T, std::vector<double>(static_cast<size_t>(n)));
    for (size_t t = 1; t < rows; t++) {
        for (int a = 0; a < n; a++) {
            double prev = table.prices[t - 1][static_cast<size_t>(a)];
            if (prev == 0.0) {
                throw std::invalid_argument("zero price makes returns undefined");
            }
            r[t - 1][static_cast<size_t>(a)] = table.prices[t][static_cast<size_t>(a)] / prev - 1.0;
        }
    }
    std::vector<double> mu(static_cast<size_t>(n), 0.0);
    for (const auto &row : r) {
        for (int a = 0; a < n; a++) mu[static_cast<size_t>(a)] += row[static_cast<size_t>(a)];
    }
    for (double &m : mu) m /= static_cast<double>(T);
    SquareMatrix A(n);
    for (int i = 0; i < n; i++) {
        for (int j = i; j < n; j++) {
            double s = 0.0;
            for (const auto &row : r) {
                s += (row[static_cast<size_t>(i)] - mu[static_cast<size_t>(i)]) *
                     (row[static_cast<size_t>(j)] - mu[static_cast<size_t>(j)]);
            }
            A(i, j) = A(j, i) = s / static_cast<double>(T - 1);
        }
    }
    return make_portfolio(std::move(A), std::move(mu), q, budget);
}

PortfolioProblem ingest_csv(const std::string &path, double q, int budget) {
    return problem_from_prices(read_prices_csv_file(path), q, budget);
}

PriceTable synth_prices(int n, uint64_t seed, int num_days) {
    if (n < 2) {
        throw std::invalid_argument("synthetic data needs at least 2 assets");
    }
    if (num_days < 3) {
        throw std::invalid_argument("synthetic data needs at least 3 days");
    }
    std::mt19937_64 rng(seed);
    std::vector<double> drift(static_cast<size_t>(n)), beta(static_cast<size_t>(n)), idio(static_cast<size_t>(n));
    for (int a = 0; a < n; a++) {
        drift[static_cast<size_t>(a)] = uniform(rng, -0.002, 0.006);
        beta[static_cast<size_t>(a)] = uniform(rng, 0.5, 1.5);
        idio[static_cast<size_t>(a)] = uniform(rng, 0.005, 0.02);
    }
    constexpr double kMarketSigma = 0.01;
    PriceTable table;
    std::vector<double> price(static_cast<size_t>(n), 1.0);
    using namespace std::chrono;
    sys_days day = year{2024} / January / 1;
    for (int t = 0; t < num_days; t++) {
        if (t > 0) {
            double market = kMarketSigma * normal01(rng);
            for (int a = 0; a < n; a++) {
                size_t i = static_cast<size_t>(a);
                double lr = drift[i] + beta[i] * market + idio[i] * normal01(rng);
                price[i] *= std::exp(lr);
            }
        }
        year_month_day ymd{day + std::chrono::days{t}};
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
        table.dates.emplace_back(buf);
        table.prices.push_back(price);
    }
    return table;
}

PortfolioProblem synth_assets(int n, uint64_t seed, double q, int budget) {
    return problem_from_prices(synth_prices(n, seed), q, budget < 0 ? n / 2 : budget);
}

PlantedInstance synth_planted(int n, int budget, uint64_t seed, double q) {
    PortfolioProblem p = synth_assets(n, seed, q, budget);
    // Any other weight-`budget` state swaps out d planted assets. That costs at least
    // d * (gap - spread) in returns and gains at most 4 d budget q max|A| in risk.
    double max_abs = 0.0;
    for (double v : p.A.data()) max_abs = std::max(max_abs, std::abs(v));
    auto [lo, hi] = std::minmax_element(p.mu.begin(), p.mu.end());
    double gap = 4.0 * q * budget * max_abs + (*hi - *lo) + 1e-3;

    std::mt19937_64 rng(derive_seed(seed, 0x706c616e74ULL));
    auto order = identity_perm(n);
    for (int i = n - 1; i > 0; i--) {
        std::swap(order[static_cast<size_t>(i)], order[uniform_index(rng, static_cast<uint64_t>(i) + 1)]);
    }
    PlantedInstance out;
    for (int i = 0; i < budget; i++) {
        int a = order[static_cast<size_t>(i)];
        p.mu[static_cast<size_t>(a)] += gap;
        out.planted_bits |= uint64_t{1} << a;
    }
    out.problem = std::move(p);
    return out;
}

BisectionProblem synth_graph(int n, double p_edge, uint64_t seed_graph, uint64_t seed_weights, double offset,
                             bool fixed_top_bit) {
    if (n < 2) {
        throw std::invalid_argument("graph needs at least 2 nodes");
    }
    if (!(p_edge > 0.0 && p_edge <= 1.0)) {
        throw std::invalid_argument("edge probability must lie in (0, 1]");
    }
    std::mt19937_64 g(seed_graph);
    std::mt19937_64 w(seed_weights);
    BisectionProblem b;
    b.n = n;
    b.weights = SquareMatrix(n);
    b.offset = offset;
    b.fixed_top_bit = fixed_top_bit;
    b.permutation = identity_perm(n);
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            if (uniform01(g) < p_edge) {
                double v;
                do {
                    v = uniform01(w);
                } while (v == 0.0);
                b.weights(i, j) = b.weights(j, i) = v;
            }
        }
    }
    return b;
}

nlohmann::json to_json(const PortfolioProblem &p) {
    nlohmann::json j;
    j["n"] = p.n;
    j["q"] = p.q;
    j["budget"] = p.budget;
    j["A"] = p.A.data();
    j["mu"] = p.mu;
    j["permutation"] = p.permutation;
    return j;
}

PortfolioProblem portfolio_from_json(const nlohmann::json &j) {
    int n = j.at("n").get<int>();
    auto flat = j.at("A").get<std::vector<double>>();
    if (flat.size() != static_cast<size_t>(n) * n) {
        throw std::invalid_argument("snapshot A has the wrong size");
    }
    SquareMatrix A(n);
    for (int r = 0; r < n; r++) {
        for (int c = 0; c < n; c++) {
            A(r, c) = flat[static_cast<size_t>(r) * n + c];
        }
    }
    PortfolioProblem p = make_portfolio(std::move(A), j.at("mu").get<std::vector<double>>(), j.at("q").get<double>(),
                                        j.at("budget").get<int>());
    if (j.contains("permutation")) {
        p.permutation = j.at("permutation").get<std::vector<int>>();
        p.validate();
    }
    return p;
}

void write_edge_list(std::ostream &out, const BisectionProblem &b) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", b.offset);
    out << "n " << b.n << " offset " << buf << " fixed_top_bit " << (b.fixed_top_bit ? 1 : 0) << '\n';
    for (int i = 0; i < b.n; i++) {
        for (int j = i + 1; j < b.n; j++) {
            if (b.weights(i, j) != 0.0) {
                std::snprintf(buf, sizeof(buf), "%.17g", b.weights(i, j));
                out << i << ' ' << j << ' ' << buf << '\n';
            }
        }
    }
}

BisectionProblem read_edge_list(std::istream &in) {
    std::string k1, k2, k3;
    BisectionProblem b;
    int fixed = 1;
    if (!(in >> k1 >> b.n >> k2 >> b.offset >> k3 >> fixed) || k1 != "n" || k2 != "offset" ||
        k3 != "fixed_top_bit") {
        throw std::runtime_error("edge list header must read 'n <nodes> offset <value> fixed_top_bit <0|1>'");
    }
    if (b.n < 2) {
        throw std::runtime_error("edge list needs at least 2 nodes");
    }
    b.fixed_top_bit = fixed != 0;
    b.weights = SquareMatrix(b.n);
    b.permutation = identity_perm(b.n);
    int u, v;
    double w;
    while (in >> u >> v >> w) {
        if (u < 0 || v < 0 || u >= b.n || v >= b.n || u == v) {
            throw std::runtime_error("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") is invalid");
        }
        b.weights(u, v) = b.weights(v, u) = w;
    }
    if (!in.eof()) {
        throw std::runtime_error("malformed edge line");
    }
    b.validate();
    return b;
}

}  // namespace dickevqe
