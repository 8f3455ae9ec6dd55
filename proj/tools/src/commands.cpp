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

#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "dickevqe/ansatz.hpp"
#include "dickevqe/locate.hpp"
#include "dickevqe/problem.hpp"
#include "dickevqe/qsim.hpp"
#include "dickevqe/version.hpp"
#include "dickevqe/vqe.hpp"
#include "run_config.hpp"

namespace dickevqe::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Options {
    std::string config_path;
    std::optional<uint64_t> seed;
    int jobs = 1;
    std::string out_dir = ".";
    bool dump_circuit = false;
};

/// The instance as the solver sees it, plus the maps back to the input's labels.
struct Instance {
    std::optional<PortfolioProblem> portfolio;
    std::optional<BisectionProblem> graph;
    /// Planted optimum in the solver's (reordered) labeling.
    std::optional<uint64_t> planted_bits;
    CostModel model;
    /// Solver label j is input label permutation[j].
    std::vector<int> permutation;
    /// The model's register was reversed by soft locate.
    bool reversed = false;

    int full_width() const { return model.full_width(); }

    uint64_t to_problem_frame(uint64_t model_bits) const {
        uint64_t b = reversed ? reverse_bits(model_bits, model.num_qubits()) : model_bits;
        return model.expand(b);
    }
    uint64_t to_model_frame(uint64_t problem_bits) const {
        uint64_t b = problem_bits & low_mask(model.num_qubits());
        return reversed ? reverse_bits(b, model.num_qubits()) : b;
    }
    uint64_t to_input_frame(uint64_t problem_bits) const { return unpermute_bits(problem_bits, permutation); }
};

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Instance build_instance(const RunConfig &cfg) {
    const ProblemSource &ps = cfg.problem;
    Instance inst;
    if (ps.kind == "graph") {
        BisectionProblem b =
            synth_graph(ps.n, ps.p_edge, ps.seed_graph, ps.seed_weights, ps.offset, ps.fixed_top_bit);
        if (ps.reorder == "laplacian") b = reorder_by_laplacian(b).first;
        inst.model = make_cost_model(b);
        inst.permutation = b.permutation;
        inst.graph = std::move(b);
        return inst;
    }
    PortfolioProblem p;
    int budget = ps.budget < 0 ? ps.n / 2 : ps.budget;
    if (ps.kind == "synthetic") {
        p = synth_assets(ps.n, ps.seed, ps.q, budget);
    } else if (ps.kind == "planted") {
        PlantedInstance pl = synth_planted(ps.n, budget, ps.seed, ps.q);
        p = std::move(pl.problem);
        inst.planted_bits = pl.planted_bits;
    } else if (ps.kind == "csv") {
        p = ingest_csv(ps.path, ps.q, budget);
    } else {
        std::ifstream in(ps.path);
        if (!in) throw std::runtime_error("cannot open snapshot '" + ps.path + "'");
        json doc = json::parse(in);
        // Accept gen-data output, which wraps the problem with run metadata.
        p = portfolio_from_json(doc.contains("problem") ? doc["problem"] : doc);
    }
    if (ps.reorder != "none") {
        auto [sorted, perm] = reorder(p, parse_reorder_key(ps.reorder));
        if (inst.planted_bits) inst.planted_bits = permute_bits(*inst.planted_bits, perm);
        p = std::move(sorted);
    }
    inst.model = make_cost_model(p, ps.cost_mode);
    inst.permutation = p.permutation;
    inst.portfolio = std::move(p);
    return inst;
}

std::string bitstring(uint64_t bits, int n) { return BasisState(n, bits).to_string(); }

json header(const RunConfig &cfg, const std::string &command) {
    return {{"version", kVersion}, {"command", command}, {"config", cfg.resolved()}};
}

void write_json(const fs::path &path, const json &j) {
    std::ofstream out(path);
    out << j.dump(2) << '\n';
}

/// CSV preamble: version and the resolved config as comment lines.
void write_csv_header(std::ostream &out, const RunConfig &cfg, const std::string &command) {
    out << "# dickevqe " << kVersion << ' ' << command << '\n';
    out << "# config: " << cfg.resolved().dump() << '\n';
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

int cmd_solve(const RunConfig &cfg, const Options &opt, std::ostream &out, std::ostream &err) {
    Instance inst = build_instance(cfg);
    const int n = inst.model.num_qubits();
    const DickeSpec spec(n, inst.model.weight);
    LocateOptions lopt;
    lopt.cell_cap = cfg.cell_cap;
    lopt.cruciform_iters = cfg.cruciform_iters;

    std::optional<LocateReport> report;
    std::optional<SubAnsatzId> hard_id;
    double theta;
    if (cfg.mode == "hard") {
        report = locate_hard(inst.model, cfg.depth, lopt);
        hard_id = report->predicted;
        theta = cfg.theta_init_pi.value_or(0.8) * std::numbers::pi;
    } else if (n % 2 == 0 && n >= 4) {
        report = locate_soft(inst.model, lopt);
        if (report->reversed) {
            inst.model.qubo = reversed(inst.model.qubo);
            inst.reversed = true;
        }
        theta = cfg.theta_init_pi
                    ? *cfg.theta_init_pi * std::numbers::pi
                    : close_to_solution_theta(spec, report->target_index, theta_grid(cfg.curve_points));
    } else {
        if (!cfg.theta_init_pi) {
            throw ConfigError("theta_init_pi is required when the solver register has an odd width");
        }
        err << "note: soft locate skipped for the " << n << "-qubit register (odd width)\n";
        theta = *cfg.theta_init_pi * std::numbers::pi;
    }

    // Reference state for the traced ground-state probability.
    std::optional<CellMin> exact;
    std::optional<uint64_t> reference;
    if (n <= kMaxExactQubits) {
        exact = brute_force_min(inst.model, ~uint64_t{0});
        reference = exact->bits;
    } else if (inst.planted_bits) {
        reference = inst.to_model_frame(*inst.planted_bits);
    } else if (report) {
        reference = report->candidate_bits;
    }

    VqeConfig vc;
    vc.cvar.alpha_schedule = cfg.alphas();
    vc.cvar.shots = cfg.shots;
    vc.schedule = cfg.schedule;
    vc.theta_init = theta;
    vc.seed = cfg.seed;
    vc.hard_id = hard_id;
    vc.reference_bits = reference;
    VqeResult vr = optimize(inst.model, vc);

    // Refine the sampled best and the locate candidate; keep the better outcome.
    GreedyOptions gopt;
    gopt.restarts = cfg.greedy_restarts;
    gopt.seed = derive_seed(cfg.seed, 0x4752454544ULL);
    GreedyResult refined = greedy_bitstring(inst.model.qubo, vr.best_bits, gopt);
    std::string source = "vqe";
    if (report) {
        GreedyResult alt = greedy_bitstring(inst.model.qubo, report->candidate_bits, gopt);
        if (alt.energy < refined.energy || (alt.energy == refined.energy && alt.bits < refined.bits)) {
            refined = std::move(alt);
            source = "locate";
        }
    }
    if (report) {
        SubAnsatz predicted = resolve(spec, report->predicted);
        report->possible_misestimation = !in_subansatz(predicted, refined.bits);
    }

    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);
    const int width = inst.full_width();
    uint64_t problem_bits = inst.to_problem_frame(refined.bits);
    bool approximate = report && (report->approximate || report->budget_exhausted);

    json sol = header(cfg, "solve");
    sol["register"] = {{"qubits", n}, {"weight", inst.model.weight}, {"pinned_top", inst.model.pinned_top},
                       {"reversed", inst.reversed}};
    sol["theta_init"] = theta;
    sol["vqe"] = {{"best_bits", bitstring(inst.to_problem_frame(vr.best_bits), width)},
                  {"best_energy", vr.best_energy},
                  {"evaluations", vr.evaluations}};
    sol["solution"] = {{"bits", bitstring(problem_bits, width)},
                       {"input_bits", bitstring(inst.to_input_frame(problem_bits), width)},
                       {"energy", refined.energy},
                       {"source", source},
                       {"greedy_steps", static_cast<int>(refined.trace.size()) - 1}};
    if (exact) {
        sol["exact"] = {{"bits", bitstring(inst.to_problem_frame(exact->bits), width)}, {"energy", exact->energy}};
        sol["solution"]["optimal"] = refined.energy <= exact->energy + 1e-12;
    }
    if (inst.planted_bits) {
        sol["planted"] = {{"bits", bitstring(*inst.planted_bits, width)},
                          {"recovered", problem_bits == *inst.planted_bits}};
    }
    if (report) {
        sol["predicted"] = format_id(report->predicted);
        sol["flags"] = to_json(*report)["flags"];
    }
    sol["peak_statevector_qubits"] = peak_state_qubits();
    sol["exit_status"] = approximate ? kApproximate : kOk;
    write_json(dir / "solution.json", sol);

    if (report) {
        json loc = header(cfg, "solve");
        loc["report"] = to_json(*report);
        write_json(dir / "locate.json", loc);
    }
    {
        std::ofstream csv(dir / "trace.csv");
        write_csv_header(csv, cfg, "solve");
        write_trace_csv(csv, vr.trace);
    }
    if (opt.dump_circuit) {
        std::ofstream c(dir / "circuit.txt");
        if (hard_id) {
            SubAnsatz sa = resolve(spec, *hard_id);
            for (size_t i = 0; i < sa.fragments.size(); i++) {
                const auto &f = sa.fragments[i];
                c << "# fragment " << i << " offset " << f.offset << '\n';
                write_circuit(c, fragment_circuit(f));
            }
        } else {
            write_circuit(c, dicke_circuit(spec));
        }
    }

    out << "solution " << bitstring(problem_bits, width) << " energy " << fmt(refined.energy);
    if (exact) out << " exact " << fmt(exact->energy);
    out << '\n';
    if (approximate) {
        err << "warning: result is approximate (cell cap or cruciform budget reached)\n";
    }
    return approximate ? kApproximate : kOk;
}

int cmd_curves(const RunConfig &cfg, const Options &opt, std::ostream &out) {
    DickeSpec spec(cfg.curve_n, cfg.curve_k);
    PrincipalComponentMetrics m = ratio_variance_curves(spec, theta_grid(cfg.curve_points));
    int last = static_cast<int>(m.counts.size()) - 1;
    int lo = cfg.curve_include_ends ? 0 : 1;
    int hi = cfg.curve_include_ends ? last : last - 1;
    fs::create_directories(opt.out_dir);
    std::ofstream csv(fs::path(opt.out_dir) / "curves.csv");
    write_csv_header(csv, cfg, "curves");
    csv << "theta_pi";
    for (int i = lo; i <= hi; i++) csv << ",ratio_" << i;
    for (int i = lo; i <= hi; i++) csv << ",variance_" << i;
    csv << '\n';
    for (size_t t = 0; t < m.thetas.size(); t++) {
        csv << fmt(m.thetas[t] / std::numbers::pi);
        for (int i = lo; i <= hi; i++) csv << ',' << fmt(m.ratio[t][static_cast<size_t>(i)]);
        for (int i = lo; i <= hi; i++) csv << ',' << fmt(m.variance[t][static_cast<size_t>(i)]);
        csv << '\n';
    }
    out << "curves: " << m.thetas.size() << " grid points, " << (hi - lo + 1) << " sub-ansatze\n";
    return kOk;
}

int cmd_interpolate(const RunConfig &cfg, const Options &opt, std::ostream &out, std::ostream &err) {
    Instance inst = build_instance(cfg);
    const int n = inst.model.num_qubits();
    DickeSpec spec(n, inst.model.weight);
    int m = split_options(Fragment{0, n, spec.k}) - 1;
    CellEvaluator ev(inst.model.qubo, spec, cfg.cell_cap);
    std::vector<CurvePoint> pts;
    std::vector<int> outer = outer_indices(m);
    for (int i : outer) pts.push_back({i, ev.evaluate(SubAnsatzId{{{i}}}).energy});
    EnergyCurve curve = interpolate_convex(pts);

    fs::create_directories(opt.out_dir);
    std::ofstream csv(fs::path(opt.out_dir) / "interpolate.csv");
    write_csv_header(csv, cfg, "interpolate");
    csv << "index,true_min,fit,outer\n";
    bool truncated = false;
    for (int i = 0; i <= m; i++) {
        SubAnsatzId id{{{i}}};
        csv << i << ',';
        if (saturating_basis_count(resolve(spec, id)) <= cfg.cell_cap) {
            csv << fmt(ev.evaluate(id).energy);
        } else {
            truncated = true;
        }
        csv << ',' << fmt(curve.value_at(i)) << ',' << (std::count(outer.begin(), outer.end(), i) ? 1 : 0) << '\n';
    }
    json j = header(cfg, "interpolate");
    j["curve"] = to_json(curve);
    write_json(fs::path(opt.out_dir) / "curve.json", j);
    if (truncated) {
        err << "warning: some sub-ansatze exceed the cell cap; their true minima are left blank\n";
    }
    out << "interpolated argmin " << curve.argmin << " of 0.." << m << '\n';
    return kOk;
}

int cmd_study(const RunConfig &cfg, const Options &opt, std::ostream &out) {
    StudyConfig sc = cfg.study;
    sc.jobs = opt.jobs;
    std::vector<StudyCell> cells = bounded_cvar_study(sc);
    fs::create_directories(opt.out_dir);
    std::ofstream summary(fs::path(opt.out_dir) / "study_summary.csv");
    std::ofstream traces(fs::path(opt.out_dir) / "study_traces.csv");
    write_csv_header(summary, cfg, "study");
    write_csv_header(traces, cfg, "study");
    summary << "alpha,beta,seed,plateau,convergence_epoch\n";
    traces << "alpha,beta,seed,epoch,expectation\n";
    for (const auto &c : cells) {
        summary << fmt(c.alpha) << ',' << c.beta << ',' << c.seed_index << ',' << fmt(c.plateau) << ','
                << c.convergence_epoch << '\n';
        for (size_t e = 0; e < c.expectations.size(); e++) {
            traces << fmt(c.alpha) << ',' << c.beta << ',' << c.seed_index << ',' << e << ','
                   << fmt(c.expectations[e]) << '\n';
        }
    }
    out << "study: " << cells.size() << " runs\n";
    return kOk;
}

int cmd_bruteforce(const RunConfig &cfg, const Options &opt, std::ostream &out) {
    Instance inst = build_instance(cfg);
    CellMin best = brute_force_min(inst.model, ~uint64_t{0});
    const int width = inst.full_width();
    uint64_t problem_bits = inst.to_problem_frame(best.bits);
    json j = header(cfg, "bruteforce");
    j["solution"] = {{"bits", bitstring(problem_bits, width)},
                     {"input_bits", bitstring(inst.to_input_frame(problem_bits), width)},
                     {"energy", best.energy},
                     {"states", best.count}};
    fs::create_directories(opt.out_dir);
    write_json(fs::path(opt.out_dir) / "bruteforce.json", j);
    out << "minimum " << bitstring(problem_bits, width) << " energy " << fmt(best.energy) << '\n';
    return kOk;
}

int cmd_gen_data(const RunConfig &cfg, const Options &opt, std::ostream &out) {
    const ProblemSource &ps = cfg.problem;
    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);
    if (ps.kind == "graph") {
        BisectionProblem b =
            synth_graph(ps.n, ps.p_edge, ps.seed_graph, ps.seed_weights, ps.offset, ps.fixed_top_bit);
        std::ofstream f(dir / "graph.txt");
        write_edge_list(f, b);
        out << "graph: " << b.n << " nodes, " << b.num_edges() << " edges\n";
        return kOk;
    }
    if (ps.kind != "synthetic" && ps.kind != "planted") {
        throw ConfigError("gen-data needs problem.kind synthetic, planted or graph");
    }
    int budget = ps.budget < 0 ? ps.n / 2 : ps.budget;
    PriceTable prices = synth_prices(ps.n, ps.seed);
    {
        std::ofstream f(dir / "prices.csv");
        write_prices_csv(f, prices);
    }
    json snap = header(cfg, "gen-data");
    if (ps.kind == "planted") {
        PlantedInstance pl = synth_planted(ps.n, budget, ps.seed, ps.q);
        snap["problem"] = to_json(pl.problem);
        snap["planted_bits"] = bitstring(pl.planted_bits, ps.n);
    } else {
        snap["problem"] = to_json(problem_from_prices(prices, ps.q, budget));
    }
    write_json(dir / "problem.json", snap);
    out << "prices: " << prices.prices.size() << " days x " << ps.n << " assets\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Dicke-state VQE with convex-interpolation locate", "dickevqe"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    Options opt;
    uint64_t seed = 0;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", opt.config_path, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "Master seed (overrides the config)");
        sub->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--out", opt.out_dir, "Output directory");
    };
    CLI::App *solve = app.add_subcommand("solve", "Locate, optimize and refine");
    add_common(solve);
    solve->add_flag("--dump-circuit", opt.dump_circuit, "Also write the circuit text");
    CLI::App *curves = app.add_subcommand("curves", "Ratio and variance curves over an identical-angle grid");
    add_common(curves);
    CLI::App *interp = app.add_subcommand("interpolate", "Outer-four interpolation against true sub-ansatz minima");
    add_common(interp);
    CLI::App *study = app.add_subcommand("study", "Alpha x beta CVaR convergence study");
    add_common(study);
    CLI::App *brute = app.add_subcommand("bruteforce", "Exact minimum by enumeration");
    add_common(brute);
    CLI::App *gen = app.add_subcommand("gen-data", "Write synthetic prices or a graph");
    add_common(gen);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err);
    }

    try {
        RunConfig cfg;
        std::string text = opt.config_path.empty() ? std::string("{}") : read_file(opt.config_path);
        cfg = parse_run_config(text, opt.config_path.empty() ? "<defaults>" : opt.config_path);
        for (CLI::App *sub : app.get_subcommands()) {
            if (sub->count("--seed")) {
                cfg.seed = seed;
                cfg.study.seed = seed;
            }
        }
        if (solve->parsed()) return cmd_solve(cfg, opt, out, err);
        if (curves->parsed()) return cmd_curves(cfg, opt, out);
        if (interp->parsed()) return cmd_interpolate(cfg, opt, out, err);
        if (study->parsed()) return cmd_study(cfg, opt, out);
        if (brute->parsed()) return cmd_bruteforce(cfg, opt, out);
        if (gen->parsed()) return cmd_gen_data(cfg, opt, out);
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return kConfigError;
}

}  // namespace dickevqe::cli
