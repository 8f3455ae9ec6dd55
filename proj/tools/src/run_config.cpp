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

#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace dickevqe::cli {

namespace {

using nlohmann::json;

class Reader {
   public:
    Reader(const std::string &text, std::string source) : text_(text), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::vector<std::string> &path, const std::string &msg) const {
        std::string where = source_;
        size_t pos = 0;
        bool found = !path.empty();
        for (const auto &p : path) {
            size_t at = text_.find("\"" + p + "\"", pos);
            if (at == std::string::npos) {
                found = false;
                break;
            }
            pos = at;
        }
        if (found) {
            where += ":" + std::to_string(1 + std::count(text_.begin(), text_.begin() + static_cast<long>(pos), '\n'));
        }
        std::string key;
        for (const auto &p : path) key += (key.empty() ? "" : ".") + p;
        throw ConfigError(where + ": " + (key.empty() ? "" : "'" + key + "': ") + msg);
    }

    void check_keys(const json &obj, const std::vector<std::string> &path, const std::set<std::string> &allowed) const {
        if (!obj.is_object()) fail(path, "expected an object");
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (!allowed.count(it.key())) {
                auto p = path;
                p.push_back(it.key());
                fail(p, "unknown key");
            }
        }
    }

    template <typename T>
    void get(const json &obj, const std::vector<std::string> &path, const std::string &key, T &out) const {
        if (!obj.contains(key)) return;
        auto p = path;
        p.push_back(key);
        const json &v = obj.at(key);
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) fail(p, "expected true or false");
            } else if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer()) fail(p, "expected an integer");
                if constexpr (std::is_unsigned_v<T>) {
                    if (v.is_number_integer() && !v.is_number_unsigned() && v.get<int64_t>() < 0) {
                        fail(p, "expected a non-negative integer");
                    }
                }
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!v.is_number()) fail(p, "expected a number");
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string()) fail(p, "expected a string");
            }
            out = v.get<T>();
        } catch (const json::exception &e) {
            fail(p, e.what());
        }
    }

    template <typename T>
    void get_list(const json &obj, const std::vector<std::string> &path, const std::string &key,
                  std::vector<T> &out) const {
        if (!obj.contains(key)) return;
        auto p = path;
        p.push_back(key);
        const json &v = obj.at(key);
        if (!v.is_array()) fail(p, "expected an array");
        out.clear();
        for (const auto &e : v) {
            if constexpr (std::is_integral_v<T>) {
                if (!e.is_number_integer()) fail(p, "expected an array of integers");
            } else {
                if (!e.is_number()) fail(p, "expected an array of numbers");
            }
            out.push_back(e.get<T>());
        }
    }

   private:
    const std::string &text_;
    std::string source_;
};

}  // namespace

std::vector<double> RunConfig::alphas() const {
    if (!alpha_schedule.empty()) return alpha_schedule;
    return geometric_alpha_schedule(alpha_start, alpha_cap, schedule.iterations());
}

nlohmann::json RunConfig::resolved() const {
    json j;
    j["problem"] = {{"kind", problem.kind},       {"n", problem.n},
                    {"budget", problem.budget},   {"q", problem.q},
                    {"seed", problem.seed},       {"path", problem.path},
                    {"cost_mode", cost_mode_name(problem.cost_mode)},
                    {"reorder", problem.reorder}, {"p_edge", problem.p_edge},
                    {"seed_graph", problem.seed_graph}, {"seed_weights", problem.seed_weights},
                    {"offset", problem.offset},   {"fixed_top_bit", problem.fixed_top_bit}};
    j["mode"] = mode;
    j["depth"] = depth;
    j["cell_cap"] = cell_cap;
    j["cruciform_iters"] = cruciform_iters;
    j["theta_init_pi"] = theta_init_pi ? json(*theta_init_pi) : json(nullptr);
    j["cvar"] = {{"alpha_start", alpha_start}, {"alpha_cap", alpha_cap}, {"alpha_schedule", alphas()}, {"shots", shots}};
    std::vector<double> rho_pi;
    for (double r : schedule.rho) rho_pi.push_back(r / std::numbers::pi);
    j["schedule"] = {{"counts", schedule.counts}, {"epochs", schedule.epochs}, {"rho_pi", rho_pi}};
    j["greedy"] = {{"restarts", greedy_restarts}};
    j["curves"] = {{"n", curve_n}, {"k", curve_k}, {"points", curve_points}, {"include_ends", curve_include_ends}};
    j["study"] = {{"n", study.n},           {"q", study.q},         {"alphas", study.alphas},
                  {"betas", study.betas},   {"seeds", study.seeds}, {"shots", study.shots},
                  {"epochs", study.epochs}, {"rho_pi", study.rho / std::numbers::pi}, {"seed", study.seed}};
    j["seed"] = seed;
    return j;
}

RunConfig parse_run_config(const std::string &text, const std::string &source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        size_t byte = std::min(e.byte, text.size());
        long line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(byte > 0 ? byte - 1 : 0), '\n');
        throw ConfigError(source + ":" + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
    }
    Reader r(text, source);
    RunConfig c;
    // Default schedule: the 12-asset soft-constraint run.
    c.schedule.counts = {8, 8, 8, 4, 2, 1, 1, 1};
    c.schedule.epochs = {15, 12, 10, 15, 19, 31, 31, 31};
    c.schedule.rho = {0.15, 0.136, 0.124, 0.113, 0.102, 0.07, 0.07, 0.07};
    for (double &v : c.schedule.rho) v *= std::numbers::pi;

    r.check_keys(doc, {}, {"problem", "mode", "depth", "cell_cap", "cruciform_iters", "theta_init_pi", "cvar",
                           "schedule", "greedy", "curves", "study", "seed", "description"});

    if (doc.contains("problem")) {
        const json &p = doc["problem"];
        const std::vector<std::string> at{"problem"};
        r.check_keys(p, at, {"kind", "n", "budget", "q", "seed", "path", "cost_mode", "reorder", "p_edge",
                             "seed_graph", "seed_weights", "offset", "fixed_top_bit"});
        auto &ps = c.problem;
        r.get(p, at, "kind", ps.kind);
        if (ps.kind == "graph") ps.reorder = "laplacian";
        r.get(p, at, "n", ps.n);
        r.get(p, at, "budget", ps.budget);
        r.get(p, at, "q", ps.q);
        r.get(p, at, "seed", ps.seed);
        r.get(p, at, "path", ps.path);
        std::string mode = cost_mode_name(ps.cost_mode);
        r.get(p, at, "cost_mode", mode);
        try {
            ps.cost_mode = parse_cost_mode(mode);
        } catch (const std::invalid_argument &e) {
            r.fail({"problem", "cost_mode"}, e.what());
        }
        r.get(p, at, "reorder", ps.reorder);
        r.get(p, at, "p_edge", ps.p_edge);
        r.get(p, at, "seed_graph", ps.seed_graph);
        r.get(p, at, "seed_weights", ps.seed_weights);
        r.get(p, at, "offset", ps.offset);
        r.get(p, at, "fixed_top_bit", ps.fixed_top_bit);

        static const std::set<std::string> kinds{"synthetic", "csv", "planted", "graph", "snapshot"};
        if (!kinds.count(ps.kind)) r.fail({"problem", "kind"}, "must be synthetic, csv, planted, graph or snapshot");
        if ((ps.kind == "csv" || ps.kind == "snapshot") && ps.path.empty()) {
            r.fail({"problem", "kind"}, "'" + ps.kind + "' needs problem.path");
        }
        if (ps.n < 2 || ps.n > 64) r.fail({"problem", "n"}, "must lie in [2, 64]");
        if (!(ps.q > 0.0)) r.fail({"problem", "q"}, "must be positive");
        if (ps.kind == "graph") {
            if (ps.reorder != "laplacian" && ps.reorder != "none") {
                r.fail({"problem", "reorder"}, "graphs reorder by 'laplacian' or 'none'");
            }
            if (!(ps.p_edge > 0.0 && ps.p_edge <= 1.0)) r.fail({"problem", "p_edge"}, "must lie in (0, 1]");
            if (ps.n % 2 != 0) r.fail({"problem", "n"}, "graph bisection needs an even node count");
        } else if (ps.reorder != "return" && ps.reorder != "variance" && ps.reorder != "none") {
            r.fail({"problem", "reorder"}, "must be return, variance or none");
        }
    }

    r.get(doc, {}, "mode", c.mode);
    if (c.mode != "soft" && c.mode != "hard") r.fail({"mode"}, "must be soft or hard");
    r.get(doc, {}, "depth", c.depth);
    if (c.mode == "hard" && c.depth < 1) r.fail({"depth"}, "hard mode needs depth >= 1");
    r.get(doc, {}, "cell_cap", c.cell_cap);
    r.get(doc, {}, "cruciform_iters", c.cruciform_iters);
    if (c.cruciform_iters < 0) r.fail({"cruciform_iters"}, "must be non-negative");
    if (doc.contains("theta_init_pi") && !doc["theta_init_pi"].is_null()) {
        double t = 0.0;
        r.get(doc, {}, "theta_init_pi", t);
        c.theta_init_pi = t;
    }
    r.get(doc, {}, "seed", c.seed);

    if (doc.contains("cvar")) {
        const json &v = doc["cvar"];
        const std::vector<std::string> at{"cvar"};
        r.check_keys(v, at, {"alpha_start", "alpha_cap", "alpha_schedule", "shots"});
        r.get(v, at, "alpha_start", c.alpha_start);
        r.get(v, at, "alpha_cap", c.alpha_cap);
        r.get_list(v, at, "alpha_schedule", c.alpha_schedule);
        r.get(v, at, "shots", c.shots);
        if (c.shots < 1) r.fail({"cvar", "shots"}, "must be at least 1");
        if (!(c.alpha_start > 0.0 && c.alpha_start <= c.alpha_cap && c.alpha_cap <= 1.0)) {
            r.fail({"cvar", "alpha_start"}, "need 0 < alpha_start <= alpha_cap <= 1");
        }
    }
    if (doc.contains("schedule")) {
        const json &v = doc["schedule"];
        const std::vector<std::string> at{"schedule"};
        r.check_keys(v, at, {"counts", "epochs", "rho_pi"});
        r.get_list(v, at, "counts", c.schedule.counts);
        r.get_list(v, at, "epochs", c.schedule.epochs);
        if (v.contains("rho_pi")) {
            r.get_list(v, at, "rho_pi", c.schedule.rho);
            for (double &x : c.schedule.rho) x *= std::numbers::pi;
        }
    }
    try {
        c.schedule.validate();
    } catch (const std::invalid_argument &e) {
        r.fail({"schedule"}, e.what());
    }
    if (!c.alpha_schedule.empty()) {
        if (c.alpha_schedule.size() != c.schedule.counts.size()) {
            r.fail({"cvar", "alpha_schedule"}, "length must match the correlation schedule");
        }
        CVaRConfig check{c.alpha_schedule, c.shots};
        try {
            check.validate();
        } catch (const std::invalid_argument &e) {
            r.fail({"cvar", "alpha_schedule"}, e.what());
        }
    }
    if (doc.contains("greedy")) {
        r.check_keys(doc["greedy"], {"greedy"}, {"restarts"});
        r.get(doc["greedy"], {"greedy"}, "restarts", c.greedy_restarts);
        if (c.greedy_restarts < 0) r.fail({"greedy", "restarts"}, "must be non-negative");
    }
    if (doc.contains("curves")) {
        const json &v = doc["curves"];
        const std::vector<std::string> at{"curves"};
        r.check_keys(v, at, {"n", "k", "points", "include_ends"});
        r.get(v, at, "n", c.curve_n);
        r.get(v, at, "k", c.curve_k);
        r.get(v, at, "points", c.curve_points);
        r.get(v, at, "include_ends", c.curve_include_ends);
        if (c.curve_n < 2 || c.curve_n > kMaxExactQubits || c.curve_n % 2) {
            r.fail({"curves", "n"}, "must be even and at most " + std::to_string(kMaxExactQubits));
        }
        if (c.curve_k < 1 || c.curve_k > c.curve_n / 2) r.fail({"curves", "k"}, "must lie in [1, n/2]");
        if (c.curve_points < 2) r.fail({"curves", "points"}, "must be at least 2");
    }
    if (doc.contains("study")) {
        const json &v = doc["study"];
        const std::vector<std::string> at{"study"};
        r.check_keys(v, at, {"n", "q", "alphas", "betas", "seeds", "shots", "epochs", "rho_pi", "seed"});
        r.get(v, at, "n", c.study.n);
        r.get(v, at, "q", c.study.q);
        r.get_list(v, at, "alphas", c.study.alphas);
        r.get_list(v, at, "betas", c.study.betas);
        r.get(v, at, "seeds", c.study.seeds);
        r.get(v, at, "shots", c.study.shots);
        r.get(v, at, "epochs", c.study.epochs);
        double rho_pi = c.study.rho / std::numbers::pi;
        r.get(v, at, "rho_pi", rho_pi);
        c.study.rho = rho_pi * std::numbers::pi;
        r.get(v, at, "seed", c.study.seed);
        if (c.study.n < 4 || c.study.n > 16 || c.study.n % 2) r.fail({"study", "n"}, "must be even in [4, 16]");
        if (c.study.seeds < 1) r.fail({"study", "seeds"}, "must be at least 1");
    }
    return c;
}

}  // namespace dickevqe::cli
