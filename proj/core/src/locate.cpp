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

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "dickevqe/random.hpp"

namespace dickevqe {

uint64_t saturating_basis_count(const SubAnsatz &sa) {
    try {
        return subansatz_basis_count(sa);
    } catch (const std::overflow_error &) {
        return ~uint64_t{0};
    }
}

namespace {

std::vector<uint64_t> all_states(int num_qubits, const std::vector<Fragment> &frags) {
    std::vector<uint64_t> out;
    if (frags.empty()) {
        out.push_back(0);
        return out;
    }
    SubspaceEnumerator e(num_qubits, frags);
    while (auto b = e.next()) {
        out.push_back(b->bits());
    }
    return out;
}

}  // namespace

CellMin subspace_min(const Qubo &cost, const SubAnsatz &sa, uint64_t cap) {
    if (sa.root.n != cost.n) {
        throw std::invalid_argument("sub-ansatz width does not match the cost");
    }
    uint64_t count = saturating_basis_count(sa);
    if (count > cap) {
        throw CapExceeded(format_id(sa.id) + " holds " + std::to_string(count) + " states, over the cap of " +
                              std::to_string(cap),
                          count);
    }
    CellMin best;
    best.energy = std::numeric_limits<double>::infinity();
    best.count = count;
    if (count == 0) {
        throw std::invalid_argument("sub-ansatz " + format_id(sa.id) + " is empty");
    }

    // E(hi | lo) = E(hi) + E(lo) - constant + sum_{j in lo} cross_hi[j]. The low group is
    // tabulated once; the high group is streamed.
    size_t split = (sa.fragments.size() + 1) / 2;
    std::vector<Fragment> hi_frags(sa.fragments.begin(), sa.fragments.begin() + static_cast<long>(split));
    std::vector<Fragment> lo_frags(sa.fragments.begin() + static_cast<long>(split), sa.fragments.end());
    std::vector<uint64_t> lo_states = all_states(cost.n, lo_frags);
    std::vector<double> lo_energy(lo_states.size());
    for (size_t b = 0; b < lo_states.size(); b++) {
        lo_energy[b] = cost.energy(lo_states[b]) - cost.constant;
    }
    int lo_width = lo_frags.empty() ? 0 : lo_frags.front().offset + lo_frags.front().size;
    std::vector<double> cross(static_cast<size_t>(lo_width), 0.0);

    SubspaceEnumerator hi_enum(cost.n, hi_frags);
    while (auto hs = hi_enum.next()) {
        uint64_t h = hs->bits();
        double eh = cost.energy(h);
        std::fill(cross.begin(), cross.end(), 0.0);
        for (uint64_t rest = h; rest; rest &= rest - 1) {
            auto row = cost.coupling.row(std::countr_zero(rest));
            for (int j = 0; j < lo_width; j++) {
                cross[static_cast<size_t>(j)] += row[static_cast<size_t>(j)];
            }
        }
        for (size_t b = 0; b < lo_states.size(); b++) {
            double e = eh + lo_energy[b];
            for (uint64_t rest = lo_states[b]; rest; rest &= rest - 1) {
                e += cross[static_cast<size_t>(std::countr_zero(rest))];
            }
            uint64_t bits = h | lo_states[b];
            if (e < best.energy || (e == best.energy && bits < best.bits)) {
                best.energy = e;
                best.bits = bits;
            }
        }
    }
    return best;
}

CellMin brute_force_min(const CostModel &model, uint64_t cap) {
    return subspace_min(model.qubo, whole(DickeSpec(model.num_qubits(), model.weight)), cap);
}

bool in_subansatz(const SubAnsatz &sa, uint64_t bits) {
    if (bits & ~low_mask(sa.root.n)) {
        return false;
    }
    for (const auto &f : sa.fragments) {
        if (popcount((bits >> f.offset) & low_mask(f.size)) != f.weight) {
            return false;
        }
    }
    return true;
}

double EnergyCurve::value_at(double x) const {
    if (!hull_fallback) {
        return (a * x + b) * x + c;
    }
    // Piecewise-linear through the lower hull, flat beyond its ends.
    std::vector<CurvePoint> hull;
    for (const auto &p : points) {
        while (hull.size() >= 2) {
            const auto &o = hull[hull.size() - 2];
            const auto &m = hull.back();
            double cr = (m.index - o.index) * (p.energy - o.energy) - (m.energy - o.energy) * (p.index - o.index);
            if (cr <= 0) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(p);
    }
    if (x <= hull.front().index) return hull.front().energy;
    if (x >= hull.back().index) return hull.back().energy;
    for (size_t i = 1; i < hull.size(); i++) {
        if (x <= hull[i].index) {
            double t = (x - hull[i - 1].index) / (hull[i].index - hull[i - 1].index);
            return hull[i - 1].energy + t * (hull[i].energy - hull[i - 1].energy);
        }
    }
    return hull.back().energy;
}

EnergyCurve interpolate_convex(std::vector<CurvePoint> points) {
    if (points.size() < 3) {
        throw std::invalid_argument("convex interpolation needs at least 3 points");
    }
    std::sort(points.begin(), points.end(), [](const CurvePoint &l, const CurvePoint &r) { return l.index < r.index; });
    for (size_t i = 1; i < points.size(); i++) {
        if (points[i].index == points[i - 1].index) {
            throw std::invalid_argument("duplicate index " + std::to_string(points[i].index) + " in interpolation");
        }
    }
    EnergyCurve curve;
    curve.points = points;
    int lo = points.front().index;
    int hi = points.back().index;

    double emin = points.front().energy, emax = emin, escale = 1.0;
    for (const auto &p : points) {
        emin = std::min(emin, p.energy);
        emax = std::max(emax, p.energy);
        escale = std::max(escale, std::abs(p.energy));
    }
    double range = emax - emin;
    if (range <= 1e-12 * escale) {
        curve.degenerate = true;
        curve.hull_fallback = true;
        curve.argmin = hi;
        return curve;
    }

    // Normal equations in centered coordinates t = i - mean.
    double mean = 0.0;
    for (const auto &p : points) mean += p.index;
    mean /= static_cast<double>(points.size());
    double s[5] = {0, 0, 0, 0, 0};
    double r[3] = {0, 0, 0};
    for (const auto &p : points) {
        double t = p.index - mean;
        double tp = 1.0;
        for (int k = 0; k < 5; k++) {
            s[k] += tp;
            if (k < 3) r[k] += tp * p.energy;
            tp *= t;
        }
    }
    // Rows: [s4 s3 s2 | r2], [s3 s2 s1 | r1], [s2 s1 s0 | r0] for (A, B, C).
    double m[3][4] = {{s[4], s[3], s[2], r[2]}, {s[3], s[2], s[1], r[1]}, {s[2], s[1], s[0], r[0]}};
    for (int col = 0; col < 3; col++) {
        int piv = col;
        for (int row = col + 1; row < 3; row++) {
            if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
        }
        std::swap(m[col], m[piv]);
        for (int row = 0; row < 3; row++) {
            if (row == col) continue;
            double f = m[row][col] / m[col][col];
            for (int k = col; k < 4; k++) m[row][k] -= f * m[col][k];
        }
    }
    double A = m[0][3] / m[0][0];
    double B = m[1][3] / m[1][1];
    double C = m[2][3] / m[2][2];

    double x_star;
    if (A < 1e-12) {
        curve.hull_fallback = true;
        size_t best = 0;
        for (size_t i = 1; i < points.size(); i++) {
            if (points[i].energy <= points[best].energy) best = i;
        }
        x_star = points[best].index;
    } else {
        curve.a = A;
        curve.b = B - 2.0 * A * mean;
        curve.c = A * mean * mean - B * mean + C;
        x_star = mean - B / (2.0 * A);
    }
    x_star = std::clamp(x_star, static_cast<double>(lo), static_cast<double>(hi));
    curve.argmin = static_cast<int>(std::floor(x_star + 0.5));

    double sq = 0.0;
    for (const auto &p : points) {
        double d = curve.value_at(p.index) - p.energy;
        sq += d * d;
    }
    curve.rms_residual = std::sqrt(sq / static_cast<double>(points.size()));
    curve.large_residual = curve.rms_residual > 0.1 * range;
    return curve;
}

std::vector<int> outer_indices(int m) {
    std::vector<int> out;
    for (int i : {1, 2, m - 2, m - 1}) {
        if (i >= 0 && i <= m && std::find(out.begin(), out.end(), i) == out.end()) {
            out.push_back(i);
        }
    }
    std::sort(out.begin(), out.end());
    if (out.size() < 3) {
        out.resize(static_cast<size_t>(m + 1));
        std::iota(out.begin(), out.end(), 0);
    }
    return out;
}

CruciformResult cruciform_greedy(const std::vector<int> &shape, const GridOracle &oracle, std::vector<int> start,
                                 int max_iters, const std::map<std::vector<int>, double> &known) {
    if (start.size() != shape.size()) {
        throw std::invalid_argument("cruciform start has the wrong dimension");
    }
    for (size_t a = 0; a < shape.size(); a++) {
        if (start[a] < 0 || start[a] >= shape[a]) {
            throw std::out_of_range("cruciform start lies outside the grid");
        }
    }
    CruciformResult res;
    std::map<std::vector<int>, double> cache = known;
    auto eval = [&](const std::vector<int> &cell) {
        auto it = cache.find(cell);
        if (it != cache.end()) return it->second;
        double v = oracle(cell);
        res.evaluations++;
        cache.emplace(cell, v);
        return v;
    };

    std::vector<int> cur = std::move(start);
    double e = eval(cur);
    res.trace.emplace_back(cur, e);
    bool moved_last = false;
    for (int it = 0; it < max_iters; it++) {
        std::vector<int> best = cur;
        double best_e = e;
        for (size_t a = 0; a < shape.size(); a++) {
            for (int d : {-1, +1}) {
                std::vector<int> nb = cur;
                nb[a] += d;
                if (nb[a] < 0 || nb[a] >= shape[a]) continue;
                double v = eval(nb);
                if (v < best_e) {
                    best_e = v;
                    best = nb;
                }
            }
        }
        moved_last = best != cur;
        if (!moved_last) break;
        cur = std::move(best);
        e = best_e;
        res.trace.emplace_back(cur, e);
    }
    res.budget_exhausted = moved_last;
    res.cell = cur;
    res.energy = e;
    return res;
}

CruciformResult cruciform_greedy(int rows, int cols, const std::function<double(int, int)> &oracle, int row, int col,
                                 int max_iters) {
    return cruciform_greedy(
        {rows, cols}, [&](const std::vector<int> &c) { return oracle(c[0], c[1]); }, {row, col}, max_iters);
}

namespace {

struct Descent {
    uint64_t bits;
    double energy;
    std::vector<std::pair<uint64_t, double>> trace;
};

Descent descend(const Qubo &cost, uint64_t start, const std::vector<int> &group, int max_steps) {
    const int n = cost.n;
    std::vector<double> field(static_cast<size_t>(n));
    for (int v = 0; v < n; v++) {
        double f = cost.linear[static_cast<size_t>(v)];
        for (uint64_t rest = start; rest; rest &= rest - 1) {
            f += cost.coupling(v, std::countr_zero(rest));
        }
        field[static_cast<size_t>(v)] = f;
    }
    Descent d{start, cost.energy(start), {}};
    d.trace.emplace_back(d.bits, d.energy);
    for (int step = 0; step < max_steps; step++) {
        double best_delta = 0.0;
        uint64_t best_bits = 0;
        int bi = -1, bj = -1;
        for (int i = 0; i < n; i++) {
            if (!((d.bits >> i) & 1u)) continue;
            for (int j = 0; j < n; j++) {
                if ((d.bits >> j) & 1u || group[static_cast<size_t>(i)] != group[static_cast<size_t>(j)]) continue;
                double delta = field[static_cast<size_t>(j)] - field[static_cast<size_t>(i)] - cost.coupling(i, j);
                uint64_t nb = d.bits ^ (uint64_t{1} << i) ^ (uint64_t{1} << j);
                if (delta < best_delta || (bi >= 0 && delta == best_delta && nb < best_bits)) {
                    best_delta = delta;
                    best_bits = nb;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi < 0) break;
        double e = cost.energy(best_bits);
        if (!(e < d.energy)) break;
        for (int v = 0; v < n; v++) {
            field[static_cast<size_t>(v)] += cost.coupling(v, bj) - cost.coupling(v, bi);
        }
        d.bits = best_bits;
        d.energy = e;
        d.trace.emplace_back(d.bits, d.energy);
    }
    return d;
}

}  // namespace

GreedyResult greedy_bitstring(const Qubo &cost, uint64_t start, const GreedyOptions &opts) {
    const int n = cost.n;
    if (start & ~low_mask(n)) {
        throw std::invalid_argument("greedy start does not fit the cost width");
    }
    std::vector<int> group(static_cast<size_t>(n), 0);
    for (size_t g = 0; g < opts.groups.size(); g++) {
        for (int q = 0; q < opts.groups[g].size; q++) {
            group[static_cast<size_t>(opts.groups[g].offset + q)] = static_cast<int>(g) + 1;
        }
    }

    Descent best = descend(cost, start, group, opts.max_steps);
    GreedyResult res;
    res.starts = 1 + std::max(0, opts.restarts);
    for (int r = 1; r <= opts.restarts; r++) {
        std::mt19937_64 rng(derive_seed(opts.seed, static_cast<uint64_t>(r)));
        uint64_t s = start;
        int k = popcount(start);
        int swaps = std::max(1, std::min(k, n - k) / 2);
        for (int t = 0; t < swaps; t++) {
            int i = static_cast<int>(uniform_index(rng, static_cast<uint64_t>(n)));
            int j = static_cast<int>(uniform_index(rng, static_cast<uint64_t>(n)));
            if (((s >> i) & 1u) && !((s >> j) & 1u) && group[static_cast<size_t>(i)] == group[static_cast<size_t>(j)]) {
                s ^= (uint64_t{1} << i) | (uint64_t{1} << j);
            }
        }
        Descent d = descend(cost, s, group, opts.max_steps);
        if (d.energy < best.energy || (d.energy == best.energy && d.bits < best.bits)) {
            best = std::move(d);
        }
    }
    res.bits = best.bits;
    res.energy = best.energy;
    res.trace = std::move(best.trace);
    return res;
}

CellEvaluator::CellEvaluator(const Qubo &cost, DickeSpec root, uint64_t cap) : cost_(cost), root_(root), cap_(cap) {}

const TrailEntry &CellEvaluator::evaluate(const SubAnsatzId &id) {
    auto it = index_.find(id);
    if (it != index_.end()) {
        return trail_[it->second];
    }
    SubAnsatz sa = resolve(root_, id);
    TrailEntry entry;
    entry.id = id;
    if (saturating_basis_count(sa) <= cap_) {
        CellMin m = subspace_min(cost_, sa, cap_);
        entry.bits = m.bits;
        entry.energy = m.energy;
    } else {
        // Too large to enumerate: descend inside the cell from each fragment's top-packed state.
        uint64_t start = 0;
        for (const auto &f : sa.fragments) {
            start |= (low_mask(f.weight) << (f.size - f.weight)) << f.offset;
        }
        GreedyOptions opts;
        opts.groups = sa.fragments;
        opts.restarts = 4;
        opts.seed = 0;
        for (char ch : format_id(id)) opts.seed = splitmix64(opts.seed ^ static_cast<uint8_t>(ch));
        GreedyResult g = greedy_bitstring(cost_, start, opts);
        entry.bits = g.bits;
        entry.energy = g.energy;
        entry.approximate = true;
        approximate_ = true;
    }
    index_.emplace(id, trail_.size());
    trail_.push_back(entry);
    return trail_.back();
}

Qubo reversed(const Qubo &q) {
    std::vector<int> perm(static_cast<size_t>(q.n));
    for (int j = 0; j < q.n; j++) perm[static_cast<size_t>(j)] = q.n - 1 - j;
    return permute(q, perm);
}

uint64_t reverse_bits(uint64_t bits, int n) {
    uint64_t out = 0;
    for (int j = 0; j < n; j++) {
        if ((bits >> j) & 1u) out |= uint64_t{1} << (n - 1 - j);
    }
    return out;
}

namespace {

SubAnsatzId level1_id(int i) { return SubAnsatzId{{{i}}}; }

EnergyCurve level1_curve(CellEvaluator &ev, DickeSpec root) {
    int m = split_options(Fragment{0, root.n, root.k}) - 1;
    std::vector<CurvePoint> pts;
    for (int i : outer_indices(m)) {
        pts.push_back({i, ev.evaluate(level1_id(i)).energy});
    }
    return interpolate_convex(pts);
}

void take_best(LocateReport &rep, const std::vector<TrailEntry> &trail) {
    bool first = true;
    for (const auto &t : trail) {
        if (first || t.energy < rep.candidate_energy ||
            (t.energy == rep.candidate_energy && t.bits < rep.candidate_bits)) {
            rep.candidate_bits = t.bits;
            rep.candidate_energy = t.energy;
            first = false;
        }
    }
}

int ceil_log2(int n) {
    int r = 0;
    while ((1 << r) < n) r++;
    return r;
}

}  // namespace

LocateReport locate_soft(const CostModel &model, const LocateOptions &opts) {
    DickeSpec root(model.num_qubits(), model.weight);
    if (root.n % 2 != 0 || root.n < 4) {
        throw std::invalid_argument("soft locate needs an even register of at least 4 qubits");
    }
    int m = split_options(Fragment{0, root.n, root.k}) - 1;
    LocateReport rep;
    rep.root = root;

    CellEvaluator ev(model.qubo, root, opts.cell_cap);
    EnergyCurve curve = level1_curve(ev, root);
    rep.curves.push_back(curve);
    rep.trail = ev.trail();
    rep.approximate = ev.any_approximate();

    if (!curve.degenerate && 2 * curve.argmin <= m) {
        Qubo rq = reversed(model.qubo);
        CellEvaluator rev(rq, root, opts.cell_cap);
        curve = level1_curve(rev, root);
        rep.curves.push_back(curve);
        rep.reversed = true;
        rep.trail.insert(rep.trail.end(), rev.trail().begin(), rev.trail().end());
        rep.approximate = rep.approximate || rev.any_approximate();
        take_best(rep, rev.trail());
    } else {
        take_best(rep, ev.trail());
    }
    rep.degenerate = curve.degenerate;
    rep.large_residual = curve.large_residual;
    rep.target_index = curve.argmin;
    rep.predicted = level1_id(curve.argmin);
    return rep;
}

LocateReport locate_hard(const CostModel &model, int depth, const LocateOptions &opts) {
    DickeSpec root(model.num_qubits(), model.weight);
    PartitionTree tree = equilibrium_partition(root, depth);
    int iters = opts.cruciform_iters > 0 ? opts.cruciform_iters : std::max(1, ceil_log2(root.n));
    LocateReport rep;
    rep.root = root;
    CellEvaluator ev(model.qubo, root, opts.cell_cap);

    EnergyCurve c1 = level1_curve(ev, root);
    rep.curves.push_back(c1);
    rep.degenerate = c1.degenerate;
    rep.large_residual = c1.large_residual;
    rep.target_index = c1.argmin;
    SubAnsatzId node = level1_id(c1.argmin);

    for (int level = 2; level <= depth; level++) {
        std::vector<int> shape = tree.child_shape(node);
        int L = *std::max_element(shape.begin(), shape.end());
        auto diag = [&](int i) {
            std::vector<int> cell(shape.size());
            for (size_t a = 0; a < shape.size(); a++) {
                cell[a] = L == 1 ? 0 : static_cast<int>(std::floor(i * (shape[a] - 1.0) / (L - 1.0) + 0.5));
            }
            return cell;
        };
        auto child = [&](const std::vector<int> &cell) {
            SubAnsatzId id = node;
            id.levels.push_back(cell);
            return id;
        };

        std::map<std::vector<int>, double> known;
        int start_step = 0;
        if (L >= 3) {
            std::vector<CurvePoint> pts;
            for (int i : outer_indices(L - 1)) {
                double e = ev.evaluate(child(diag(i))).energy;
                known[diag(i)] = e;
                pts.push_back({i, e});
            }
            EnergyCurve c = interpolate_convex(pts);
            rep.curves.push_back(c);
            rep.degenerate = rep.degenerate || c.degenerate;
            rep.large_residual = rep.large_residual || c.large_residual;
            start_step = c.argmin;
        }
        CruciformResult cr = cruciform_greedy(
            shape, [&](const std::vector<int> &cell) { return ev.evaluate(child(cell)).energy; }, diag(start_step),
            iters, known);
        rep.budget_exhausted = rep.budget_exhausted || cr.budget_exhausted;
        node = child(cr.cell);
        rep.cruciform.push_back(std::move(cr));
    }

    const TrailEntry &final_cell = ev.evaluate(node);
    rep.predicted = node;
    rep.candidate_bits = final_cell.bits;
    rep.candidate_energy = final_cell.energy;
    rep.trail = ev.trail();
    rep.approximate = ev.any_approximate();
    return rep;
}

nlohmann::json to_json(const EnergyCurve &curve) {
    nlohmann::json j;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto &p : curve.points) {
        pts.push_back({{"index", p.index}, {"energy", p.energy}});
    }
    j["points"] = pts;
    j["fit"] = {{"a", curve.a}, {"b", curve.b}, {"c", curve.c}};
    j["hull_fallback"] = curve.hull_fallback;
    j["degenerate"] = curve.degenerate;
    j["large_residual"] = curve.large_residual;
    j["rms_residual"] = curve.rms_residual;
    j["argmin"] = curve.argmin;
    return j;
}

nlohmann::json to_json(const LocateReport &r) {
    nlohmann::json j;
    j["root"] = {{"n", r.root.n}, {"k", r.root.k}};
    j["predicted"] = format_id(r.predicted);
    j["target_index"] = r.target_index;
    j["candidate"] = {{"bits", BasisState(r.root.n, r.candidate_bits).to_string()}, {"energy", r.candidate_energy}};
    nlohmann::json trail = nlohmann::json::array();
    for (const auto &t : r.trail) {
        trail.push_back({{"id", format_id(t.id)},
                         {"bits", BasisState(r.root.n, t.bits).to_string()},
                         {"energy", t.energy},
                         {"approximate", t.approximate}});
    }
    j["trail"] = trail;
    nlohmann::json curves = nlohmann::json::array();
    for (const auto &c : r.curves) curves.push_back(to_json(c));
    j["curves"] = curves;
    nlohmann::json cruc = nlohmann::json::array();
    for (const auto &c : r.cruciform) {
        nlohmann::json path = nlohmann::json::array();
        for (const auto &[cell, e] : c.trace) path.push_back({{"cell", cell}, {"energy", e}});
        cruc.push_back({{"cell", c.cell},
                        {"energy", c.energy},
                        {"evaluations", c.evaluations},
                        {"budget_exhausted", c.budget_exhausted},
                        {"trace", path}});
    }
    j["cruciform"] = cruc;
    j["flags"] = {{"reversed", r.reversed},
                  {"degenerate", r.degenerate},
                  {"large_residual", r.large_residual},
                  {"approximate", r.approximate},
                  {"budget_exhausted", r.budget_exhausted},
                  {"possible_misestimation", r.possible_misestimation}};
    return j;
}

}  // namespace dickevqe
