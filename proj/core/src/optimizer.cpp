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

#include "dickevqe/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace dickevqe {

namespace {

using Vec = std::vector<double>;

double norm(const Vec &v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

Vec sub(const Vec &a, const Vec &b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); i++) r[i] = a[i] - b[i];
    return r;
}

/// Solves M x = rhs in place by partial pivoting. Returns nullopt when M is numerically singular.
std::optional<Vec> solve(std::vector<Vec> M, Vec rhs) {
    size_t n = rhs.size();
    double scale = 0.0;
    for (const auto &row : M) {
        for (double v : row) scale = std::max(scale, std::abs(v));
    }
    if (scale == 0.0) return std::nullopt;
    for (size_t col = 0; col < n; col++) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; r++) {
            if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
        }
        if (std::abs(M[piv][col]) < 1e-12 * scale) return std::nullopt;
        std::swap(M[col], M[piv]);
        std::swap(rhs[col], rhs[piv]);
        for (size_t r = col + 1; r < n; r++) {
            double f = M[r][col] / M[col][col];
            for (size_t k = col; k < n; k++) M[r][k] -= f * M[col][k];
            rhs[r] -= f * rhs[col];
        }
    }
    Vec x(n);
    for (size_t i = n; i-- > 0;) {
        double s = rhs[i];
        for (size_t k = i + 1; k < n; k++) s -= M[i][k] * x[k];
        x[i] = s / M[i][i];
    }
    return x;
}

/// Coefficients of `e` in the basis of the edge rows `D` (solves D^T c = e).
std::optional<Vec> edge_coefficients(const std::vector<Vec> &D, const Vec &e) {
    std::vector<Vec> T(D.size(), Vec(D.size()));
    for (size_t i = 0; i < D.size(); i++) {
        for (size_t j = 0; j < D.size(); j++) T[i][j] = D[j][i];
    }
    return solve(std::move(T), e);
}

}  // namespace

TrustRegionResult minimize_trust_region(const Objective &f, std::vector<double> x0, const TrustRegionOptions &opts) {
    if (!(opts.rho_begin > 0.0) || !(opts.rho_end > 0.0) || opts.rho_end > opts.rho_begin) {
        throw std::invalid_argument("trust region radii must satisfy 0 < rho_end <= rho_begin");
    }
    if (opts.max_evals < 1) {
        throw std::invalid_argument("trust region needs at least one evaluation");
    }
    const size_t n = x0.size();
    TrustRegionResult res;
    double rho = opts.rho_begin;

    auto eval = [&](const Vec &x) {
        double v = f(x);
        res.history.push_back(v);
        res.evaluations++;
        if (res.x.empty() || v < res.f) {
            res.x = x;
            res.f = v;
        }
        return v;
    };
    auto budget_left = [&] { return res.evaluations < opts.max_evals; };

    std::vector<Vec> pts{x0};
    Vec vals{eval(x0)};
    auto build_simplex = [&](const Vec &center, double center_val) {
        pts.assign(1, center);
        vals.assign(1, center_val);
        for (size_t i = 0; i < n && budget_left(); i++) {
            Vec p = center;
            p[i] += rho;
            pts.push_back(p);
            vals.push_back(eval(p));
        }
    };
    build_simplex(x0, vals[0]);

    constexpr double kMinSpan = 0.1;
    while (budget_left() && pts.size() == n + 1 && n > 0) {
        size_t best = static_cast<size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
        const Vec xb = pts[best];
        const double fb = vals[best];

        // Linear model gradient from (x_i - x_b) . g = f_i - f_b.
        std::vector<Vec> D;
        Vec df;
        for (size_t i = 0; i <= n; i++) {
            if (i == best) continue;
            D.push_back(sub(pts[i], xb));
            df.push_back(vals[i] - fb);
        }
        std::optional<Vec> g = solve(D, df);
        if (!g) {
            build_simplex(xb, fb);
            continue;
        }
        double gn = norm(*g);
        bool improved = false;
        if (gn > 0.0) {
            Vec xt = xb;
            for (size_t i = 0; i < n; i++) xt[i] -= rho * (*g)[i] / gn;
            double ft = eval(xt);
            if (ft < fb) {
                // Replace the worst vertex when the new edge keeps enough of its direction;
                // otherwise the vertex whose edge the new point spans best.
                std::vector<size_t> owner;
                for (size_t i = 0; i <= n; i++) {
                    if (i != best) owner.push_back(i);
                }
                Vec e = sub(xt, xb);
                double en = norm(e);
                std::optional<Vec> c = edge_coefficients(D, e);
                size_t worst = static_cast<size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
                size_t nb = worst;
                if (c) {
                    auto span_of = [&](size_t r) { return std::abs((*c)[r]) * norm(D[r]) / en; };
                    size_t wr = static_cast<size_t>(std::find(owner.begin(), owner.end(), worst) - owner.begin());
                    if (worst == best || wr == owner.size() || span_of(wr) < kMinSpan) {
                        size_t pick = 0;
                        for (size_t r = 1; r < owner.size(); r++) {
                            if (span_of(r) > span_of(pick)) pick = r;
                        }
                        nb = owner[pick];
                    }
                }
                pts[nb] = xt;
                vals[nb] = ft;
                improved = true;
            }
        }
        if (improved || !budget_left()) continue;

        // Failed step: repair a vertex that sits too far out, else shrink the radius.
        size_t far_i = best;
        double far_d = 0.0;
        for (size_t i = 0; i <= n; i++) {
            double d = norm(sub(pts[i], xb));
            if (d > far_d) {
                far_d = d;
                far_i = i;
            }
        }
        if (far_d > 2.0 * rho) {
            Vec dir = sub(pts[far_i], xb);
            Vec p = xb;
            for (size_t i = 0; i < n; i++) p[i] += rho * dir[i] / far_d;
            pts[far_i] = p;
            vals[far_i] = eval(p);
            continue;
        }
        if (rho <= opts.rho_end) break;
        rho = std::max(rho * 0.5, opts.rho_end);
    }
    res.final_rho = rho;
    return res;
}

}  // namespace dickevqe
