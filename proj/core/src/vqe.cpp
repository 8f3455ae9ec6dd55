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

#include "dickevqe/vqe.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "dickevqe/ansatz.hpp"
#include "dickevqe/locate.hpp"
#include "dickevqe/optimizer.hpp"
#include "dickevqe/qsim.hpp"
#include "dickevqe/random.hpp"

namespace dickevqe {

double cvar(std::vector<double> energies, double alpha) {
    if (energies.empty()) {
        throw std::invalid_argument("CVaR of an empty sample");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("CVaR confidence level must lie in (0, 1]");
    }
    size_t k = static_cast<size_t>(std::ceil(alpha * static_cast<double>(energies.size()) - 1e-9));
    k = std::clamp<size_t>(k, 1, energies.size());
    std::partial_sort(energies.begin(), energies.begin() + static_cast<long>(k), energies.end());
    double s = 0.0;
    for (size_t i = 0; i < k; i++) s += energies[i];
    return s / static_cast<double>(k);
}

std::vector<double> geometric_alpha_schedule(double start, double cap, int iterations) {
    if (iterations < 1) {
        throw std::invalid_argument("alpha schedule needs at least one iteration");
    }
    if (!(start > 0.0 && start <= cap && cap <= 1.0)) {
        throw std::invalid_argument("alpha schedule needs 0 < start <= cap <= 1");
    }
    std::vector<double> out(static_cast<size_t>(iterations));
    for (int i = 0; i < iterations; i++) {
        double t = iterations == 1 ? 1.0 : static_cast<double>(i) / (iterations - 1);
        out[static_cast<size_t>(i)] = start * std::pow(cap / start, t);
    }
    out.back() = cap;
    return out;
}

void CVaRConfig::validate() const {
    if (shots < 1) {
        throw std::invalid_argument("shots must be at least 1");
    }
    for (size_t i = 0; i < alpha_schedule.size(); i++) {
        double a = alpha_schedule[i];
        if (!(a > 0.0 && a <= 1.0)) {
            throw std::invalid_argument("alpha values must lie in (0, 1]");
        }
        if (i > 0 && a < alpha_schedule[i - 1]) {
            throw std::invalid_argument("alpha schedule must be non-decreasing");
        }
    }
}

void CorrelationSchedule::validate() const {
    if (counts.empty()) {
        throw std::invalid_argument("correlation schedule is empty");
    }
    if (epochs.size() != counts.size() || rho.size() != counts.size()) {
        throw std::invalid_argument("correlation schedule arrays must have equal length");
    }
    for (size_t i = 0; i < counts.size(); i++) {
        if (counts[i] < 1) throw std::invalid_argument("correlation counts must be at least 1");
        if (epochs[i] < 1) throw std::invalid_argument("epoch budgets must be at least 1");
        if (!(rho[i] > 0.0)) throw std::invalid_argument("trust radii must be positive");
        if (i > 0 && counts[i] > counts[i - 1]) {
            throw std::invalid_argument("correlation counts must be non-increasing");
        }
    }
}

int num_groups(int slots, int beta) {
    if (beta < 1) throw std::invalid_argument("beta must be at least 1");
    return (slots + beta - 1) / beta;
}

ParameterVector expand_params(const ParameterVector &logical, int beta, int total_slots) {
    if (beta < 1) {
        throw std::invalid_argument("beta must be at least 1");
    }
    if (beta > total_slots && total_slots > 0) {
        throw std::invalid_argument("beta exceeds the slot count");
    }
    if (static_cast<int>(logical.size()) != num_groups(total_slots, beta)) {
        throw std::invalid_argument("logical parameter count does not match the grouping");
    }
    ParameterVector out(static_cast<size_t>(total_slots));
    for (int s = 0; s < total_slots; s++) {
        out[static_cast<size_t>(s)] = logical[static_cast<size_t>(s / beta)];
    }
    return out;
}

ParameterVector group_params(const ParameterVector &physical, int beta) {
    int slots = static_cast<int>(physical.size());
    ParameterVector out(static_cast<size_t>(num_groups(slots, beta)), 0.0);
    for (size_t g = 0; g < out.size(); g++) {
        int lo = static_cast<int>(g) * beta;
        int hi = std::min(slots, lo + beta);
        double s = 0.0;
        for (int i = lo; i < hi; i++) s += physical[static_cast<size_t>(i)];
        out[g] = s / (hi - lo);
    }
    return out;
}

std::vector<double> theta_grid(int points) {
    if (points < 2) {
        throw std::invalid_argument("theta grid needs at least 2 points");
    }
    std::vector<double> g(static_cast<size_t>(points));
    for (int i = 0; i < points; i++) {
        g[static_cast<size_t>(i)] = std::numbers::pi * i / (points - 1);
    }
    return g;
}

PrincipalComponentMetrics ratio_variance_curves(DickeSpec spec, const std::vector<double> &grid) {
    if (spec.n % 2 != 0 || spec.n > kMaxExactQubits) {
        throw std::invalid_argument("ratio curves need an even register of at most " +
                                    std::to_string(kMaxExactQubits) + " qubits");
    }
    Fragment root{0, spec.n, spec.k};
    const int options = split_options(root);
    const int umin = split_min_upper(root);
    const int half = spec.n / 2;
    PrincipalComponentMetrics m;
    m.spec = spec;
    m.thetas = grid;
    for (int i = 0; i < options; i++) {
        auto [up, low] = split_child(root, i);
        m.counts.push_back(binomial(up.size, up.weight) * binomial(low.size, low.weight));
    }
    Circuit c = dicke_circuit(spec);
    for (double theta : grid) {
        ParameterVector params(static_cast<size_t>(c.num_slots()), theta);
        StateVector s = simulate(c, params);
        std::vector<double> ratio(static_cast<size_t>(options), 0.0);
        std::vector<double> var(static_cast<size_t>(options), 0.0);
        auto amps = s.amplitudes();
        auto index_of = [&](uint64_t bits) { return popcount(bits >> half) - umin; };
        for_each_combination(spec.n, spec.k, [&](uint64_t bits) {
            ratio[static_cast<size_t>(index_of(bits))] += std::norm(amps[bits]);
        });
        for_each_combination(spec.n, spec.k, [&](uint64_t bits) {
            size_t i = static_cast<size_t>(index_of(bits));
            double d = std::norm(amps[bits]) - ratio[i] / static_cast<double>(m.counts[i]);
            var[i] += d * d;
        });
        for (int i = 0; i < options; i++) {
            var[static_cast<size_t>(i)] /= static_cast<double>(m.counts[static_cast<size_t>(i)]);
        }
        m.ratio.push_back(std::move(ratio));
        m.variance.push_back(std::move(var));
    }
    return m;
}

double close_to_solution_theta(DickeSpec spec, int target, const std::vector<double> &grid, double retention) {
    std::vector<double> admissible;
    for (double t : grid) {
        if (t >= std::numbers::pi / 2 - 1e-12 && t < std::numbers::pi - 1e-12) admissible.push_back(t);
    }
    if (admissible.empty()) {
        throw std::invalid_argument("no grid point lies in [pi/2, pi)");
    }
    std::sort(admissible.begin(), admissible.end());
    PrincipalComponentMetrics m = ratio_variance_curves(spec, admissible);
    if (target < 0 || target >= static_cast<int>(m.counts.size())) {
        throw std::out_of_range("target sub-ansatz index out of range");
    }
    size_t best = 0;
    for (size_t t = 1; t < admissible.size(); t++) {
        if (m.ratio[t][static_cast<size_t>(target)] > m.ratio[best][static_cast<size_t>(target)]) best = t;
    }
    double peak = m.ratio[best][static_cast<size_t>(target)];
    if (best > 0 && m.ratio[best - 1][static_cast<size_t>(target)] >= retention * peak) {
        best--;
    }
    return admissible[best];
}

namespace {

struct Layout {
    std::vector<Circuit> circuits;
    std::optional<SubAnsatz> sa;
    int total_slots = 0;
};

Layout make_layout(const CostModel &model, const std::optional<SubAnsatzId> &hard_id) {
    Layout l;
    DickeSpec root(model.num_qubits(), model.weight);
    if (hard_id) {
        l.sa = resolve(root, *hard_id);
        for (const auto &f : l.sa->fragments) {
            if (f.size > kMaxStateQubits) {
                throw std::invalid_argument("fragment of " + std::to_string(f.size) + " qubits is too large");
            }
            l.circuits.push_back(fragment_circuit(f));
        }
    } else {
        if (root.n > kMaxStateQubits) {
            throw std::invalid_argument("soft mode needs a full statevector; " + std::to_string(root.n) +
                                        " qubits is too many");
        }
        l.circuits.push_back(dicke_circuit(root));
    }
    for (const auto &c : l.circuits) l.total_slots += c.num_slots();
    return l;
}

std::vector<ParameterVector> split_params(const Layout &l, const ParameterVector &flat) {
    std::vector<ParameterVector> out;
    size_t pos = 0;
    for (const auto &c : l.circuits) {
        size_t s = static_cast<size_t>(c.num_slots());
        out.emplace_back(flat.begin() + static_cast<long>(pos), flat.begin() + static_cast<long>(pos + s));
        pos += s;
    }
    return out;
}

double layout_probability(const Layout &l, const std::vector<ParameterVector> &params, uint64_t bits) {
    if (!l.sa) {
        return std::norm(simulate(l.circuits[0], params[0]).amplitude(bits));
    }
    if (!in_subansatz(*l.sa, bits)) return 0.0;
    double p = 1.0;
    for (size_t i = 0; i < l.circuits.size(); i++) {
        const auto &f = l.sa->fragments[i];
        uint64_t local = (bits >> f.offset) & low_mask(f.size);
        p *= std::norm(simulate(l.circuits[i], params[i]).amplitude(local));
    }
    return p;
}

}  // namespace

double state_probability(const CostModel &model, const std::optional<SubAnsatzId> &hard_id,
                         const std::vector<ParameterVector> &params, uint64_t bits) {
    return layout_probability(make_layout(model, hard_id), params, bits);
}

VqeResult optimize(const CostModel &model, const VqeConfig &cfg) {
    cfg.schedule.validate();
    cfg.cvar.validate();
    const int iters = cfg.schedule.iterations();
    if (static_cast<int>(cfg.cvar.alpha_schedule.size()) != iters) {
        throw std::invalid_argument("alpha schedule length must match the correlation schedule");
    }
    Layout layout = make_layout(model, cfg.hard_id);
    const int n = model.num_qubits();
    const int slots = layout.total_slots;

    VqeResult res;
    res.best_energy = std::numeric_limits<double>::infinity();
    ParameterVector physical(static_cast<size_t>(slots), cfg.theta_init);
    uint64_t counter = 0;

    for (int it = 0; it < iters; it++) {
        const double alpha = cfg.cvar.alpha_schedule[static_cast<size_t>(it)];
        const int beta = std::min(cfg.schedule.counts[static_cast<size_t>(it)], std::max(1, slots));
        auto objective = [&](const ParameterVector &logical) {
            ParameterVector phys = slots > 0 ? expand_params(logical, beta, slots) : ParameterVector{};
            auto per = split_params(layout, phys);
            uint64_t seed = derive_seed(cfg.seed, counter++);
            std::vector<BasisState> shots;
            double gs_prob = std::numeric_limits<double>::quiet_NaN();
            if (layout.sa) {
                shots = run_subansatz(*layout.sa, per, cfg.cvar.shots, seed);
                if (cfg.reference_bits) gs_prob = layout_probability(layout, per, *cfg.reference_bits);
            } else {
                StateVector sv = simulate(layout.circuits[0], per[0]);
                shots = sample(sv, cfg.cvar.shots, seed, model.weight);
                if (cfg.reference_bits && n <= kMaxExactQubits) gs_prob = std::norm(sv.amplitude(*cfg.reference_bits));
            }
            std::vector<double> energies;
            energies.reserve(shots.size());
            for (const auto &b : shots) {
                if (b.hamming_weight() != model.weight) continue;
                double e = model.energy(b.bits());
                energies.push_back(e);
                if (e < res.best_energy || (e == res.best_energy && b.bits() < res.best_bits)) {
                    res.best_energy = e;
                    res.best_bits = b.bits();
                }
            }
            if (energies.empty()) {
                throw std::logic_error("no sample survived weight post-selection");
            }
            double value = cvar(std::move(energies), alpha);
            TraceRow row;
            row.iteration = it;
            row.epoch = res.evaluations++;
            row.alpha = alpha;
            row.beta = beta;
            row.expectation = value;
            row.ground_state_probability = gs_prob;
            row.best_energy = res.best_energy;
            res.trace.push_back(row);
            return value;
        };

        ParameterVector logical = group_params(physical, beta);
        TrustRegionOptions topt;
        topt.rho_begin = cfg.schedule.rho[static_cast<size_t>(it)];
        topt.rho_end = std::min(1e-3, topt.rho_begin);
        topt.max_evals = cfg.schedule.epochs[static_cast<size_t>(it)];
        TrustRegionResult tr = minimize_trust_region(objective, logical, topt);
        physical = slots > 0 ? expand_params(tr.x, beta, slots) : ParameterVector{};
    }
    res.params = split_params(layout, physical);
    return res;
}

void write_trace_csv(std::ostream &out, const std::vector<TraceRow> &trace) {
    out << "iteration,epoch,alpha,beta,expectation,ground_state_probability,best_energy\n";
    char buf[256];
    for (const auto &r : trace) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.6g,%d,%.12g,", r.iteration, r.epoch, r.alpha, r.beta, r.expectation);
        out << buf;
        if (std::isnan(r.ground_state_probability)) {
            out << ',';
        } else {
            std::snprintf(buf, sizeof(buf), "%.12g,", r.ground_state_probability);
            out << buf;
        }
        std::snprintf(buf, sizeof(buf), "%.12g\n", r.best_energy);
        out << buf;
    }
}

std::pair<double, int> plateau_and_convergence(const std::vector<double> &expectations) {
    if (expectations.empty()) {
        throw std::invalid_argument("empty expectation trace");
    }
    std::vector<double> best(expectations.size());
    double run = expectations[0];
    for (size_t t = 0; t < expectations.size(); t++) {
        run = std::min(run, expectations[t]);
        best[t] = run;
    }
    double plateau = best.back();
    double descent = expectations[0] - plateau;
    for (size_t t = 0; t < best.size(); t++) {
        if (best[t] - plateau <= 0.1 * descent) {
            return {plateau, static_cast<int>(t)};
        }
    }
    return {plateau, static_cast<int>(best.size()) - 1};
}

std::vector<StudyCell> bounded_cvar_study(const StudyConfig &cfg) {
    if (cfg.n > 16 || cfg.n % 2 != 0) {
        throw std::invalid_argument("the bounded CVaR study runs on even registers of at most 16 qubits");
    }
    DickeSpec spec(cfg.n, cfg.n / 2);
    const int slots = dicke_circuit(spec).num_slots();
    std::vector<int> betas = cfg.betas;
    if (betas.empty()) {
        betas = {1, std::max(1, slots / 4), std::max(1, slots / 2), slots};
    }
    std::vector<double> grid = theta_grid(21);

    const size_t per_seed = cfg.alphas.size() * betas.size();
    std::vector<StudyCell> cells(per_seed * static_cast<size_t>(std::max(0, cfg.seeds)));
    auto run_seed = [&](int s) {
        uint64_t inst_seed = derive_seed(cfg.seed, static_cast<uint64_t>(s));
        PortfolioProblem p = reorder(synth_assets(cfg.n, inst_seed, cfg.q), ReorderKey::ByReturn).first;
        CostModel model = make_cost_model(p);
        LocateReport loc = locate_soft(model);
        if (loc.reversed) {
            model.qubo = reversed(model.qubo);
        }
        double theta = close_to_solution_theta(spec, loc.target_index, grid);
        size_t slot = per_seed * static_cast<size_t>(s);
        for (double alpha : cfg.alphas) {
            for (int beta : betas) {
                VqeConfig vc;
                vc.cvar.alpha_schedule = {alpha};
                vc.cvar.shots = cfg.shots;
                vc.schedule.counts = {beta};
                vc.schedule.epochs = {cfg.epochs};
                vc.schedule.rho = {cfg.rho};
                vc.theta_init = theta;
                vc.seed = derive_seed(inst_seed, 0x5354554459ULL);
                VqeResult r = optimize(model, vc);
                StudyCell &cell = cells[slot++];
                cell.alpha = alpha;
                cell.beta = beta;
                cell.seed_index = s;
                for (const auto &row : r.trace) cell.expectations.push_back(row.expectation);
                std::tie(cell.plateau, cell.convergence_epoch) = plateau_and_convergence(cell.expectations);
            }
        }
    };

    int workers = std::clamp(cfg.jobs, 1, std::max(1, cfg.seeds));
    if (workers == 1) {
        for (int s = 0; s < cfg.seeds; s++) run_seed(s);
        return cells;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; w++) {
        pool.emplace_back([&] {
            for (int s = next++; s < cfg.seeds; s = next++) {
                try {
                    run_seed(s);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mu);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto &t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return cells;
}

}  // namespace dickevqe
