#include "clab/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "clab/calderon.hpp"
#include "clab/clf1.hpp"
#include "clab/error.hpp"
#include "clab/families.hpp"
#include "clab/spectral_ops.hpp"

namespace clab {

using json = nlohmann::ordered_json;

const char* status_name(RunStatus s) {
    switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blowup_suspected: return "blow-up suspected";
    case RunStatus::numerical_failure: return "numerical failure";
    }
    return "?";
}

namespace {

const char* solver_name(Solver s) {
    switch (s) {
    case Solver::direct: return "direct";
    case Solver::split_perturbed: return "split-perturbed";
    case Solver::mollified: return "mollified";
    }
    return "?";
}

Solver solver_from(const std::string& s) {
    if (s == "direct") return Solver::direct;
    if (s == "split-perturbed") return Solver::split_perturbed;
    if (s == "mollified") return Solver::mollified;
    throw ValidationError("unknown solver '" + s + "'");
}

json exponent(double p) { return std::isinf(p) ? json("inf") : json(p); }

double exponent_from(const json& v) {
    if (v.is_string()) {
        require(v.get<std::string>() == "inf", "exponent must be a number or \"inf\"");
        return kInf;
    }
    require(v.is_number(), "exponent must be a number or \"inf\"");
    return v.get<double>();
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
    require(j.is_object(), where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : keys) ok = ok || it.key() == k;
        require(ok, "unknown key '" + it.key() + "' in " + where);
    }
}

template <class T>
void get(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("bad value for '") + key + "'");
    }
}

std::string series_name(std::size_t i) {
    char b[32];
    std::snprintf(b, sizeof b, "u_%04zu.clf1", i);
    return b;
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    only_keys(j, {"clab_config", "grid", "initial", "horizon", "solver", "schedule", "picard", "rho",
                  "split", "continuation", "diagnostics", "gates", "output"},
              "config");
    require(j.contains("clab_config") && j["clab_config"] == 1, "config needs \"clab_config\": 1");
    ExperimentConfig c;
    if (j.contains("grid")) {
        const json& g = j["grid"];
        only_keys(g, {"dim", "n", "box"}, "grid");
        get(g, "dim", c.dim);
        get(g, "n", c.n);
        get(g, "box", c.box);
    }
    if (j.contains("initial")) {
        const json& i = j["initial"];
        only_keys(i, {"file", "family", "amplitude", "seed", "alpha"}, "initial");
        get(i, "file", c.file);
        get(i, "family", c.family);
        get(i, "amplitude", c.amplitude);
        get(i, "seed", c.seed);
        get(i, "alpha", c.alpha);
    }
    get(j, "horizon", c.horizon);
    if (j.contains("solver")) c.solver = solver_from(j["solver"].get<std::string>());
    if (j.contains("schedule")) {
        const json& s = j["schedule"];
        only_keys(s, {"J", "uniform", "substeps"}, "schedule");
        get(s, "J", c.solver_cfg.J);
        get(s, "uniform", c.solver_cfg.uniform);
        get(s, "substeps", c.solver_cfg.substeps);
    }
    if (j.contains("picard")) {
        const json& s = j["picard"];
        only_keys(s, {"tolerance", "max_iterations", "kato_p"}, "picard");
        get(s, "tolerance", c.solver_cfg.tolerance);
        get(s, "max_iterations", c.solver_cfg.max_iterations);
        get(s, "kato_p", c.solver_cfg.kato_p);
    }
    get(j, "rho", c.rho);
    if (j.contains("split")) {
        const json& s = j["split"];
        only_keys(s, {"p", "q", "lambda"}, "split");
        if (s.contains("p")) c.split_p = exponent_from(s["p"]);
        if (s.contains("q")) c.split_q = exponent_from(s["q"]);
        get(s, "lambda", c.split_lambda);
    }
    if (j.contains("continuation")) {
        only_keys(j["continuation"], {"min_step_fraction"}, "continuation");
        get(j["continuation"], "min_step_fraction", c.min_step_fraction);
    }
    if (j.contains("diagnostics")) {
        const json& d = j["diagnostics"];
        only_keys(d, {"lp", "besov_p", "besov_q"}, "diagnostics");
        if (d.contains("lp")) {
            c.lp_set.clear();
            for (const auto& v : d["lp"]) c.lp_set.push_back(exponent_from(v));
        }
        if (d.contains("besov_p")) c.besov_p = exponent_from(d["besov_p"]);
        if (d.contains("besov_q")) c.besov_q = exponent_from(d["besov_q"]);
    }
    if (j.contains("gates")) {
        only_keys(j["gates"], {"residual", "divergence"}, "gates");
        get(j["gates"], "residual", c.residual_gate);
        get(j["gates"], "divergence", c.divergence_gate);
    }
    get(j, "output", c.out);
    require(c.horizon > 0, "horizon must be positive");
    require(c.min_step_fraction > 0 && c.min_step_fraction <= 1, "min_step_fraction must lie in (0, 1]");
    return c;
}

std::string config_json(const ExperimentConfig& c) {
    json j;
    j["clab_config"] = 1;
    j["grid"] = {{"dim", c.dim}, {"n", c.n}, {"box", c.box}};
    if (!c.file.empty())
        j["initial"] = {{"file", c.file}};
    else
        j["initial"] = {{"family", c.family}, {"amplitude", c.amplitude}, {"seed", c.seed}, {"alpha", c.alpha}};
    j["horizon"] = c.horizon;
    j["solver"] = solver_name(c.solver);
    j["schedule"] = {{"J", c.solver_cfg.J}, {"uniform", c.solver_cfg.uniform}, {"substeps", c.solver_cfg.substeps}};
    j["picard"] = {{"tolerance", c.solver_cfg.tolerance},
                   {"max_iterations", c.solver_cfg.max_iterations},
                   {"kato_p", c.solver_cfg.kato_p}};
    j["rho"] = c.rho;
    j["split"] = {{"p", exponent(c.split_p)}, {"q", exponent(c.split_q)}, {"lambda", c.split_lambda}};
    j["continuation"] = {{"min_step_fraction", c.min_step_fraction}};
    json lp = json::array();
    for (double p : c.lp_set) lp.push_back(exponent(p));
    j["diagnostics"] = {{"lp", lp}, {"besov_p", exponent(c.besov_p)}, {"besov_q", exponent(c.besov_q)}};
    j["gates"] = {{"residual", c.residual_gate}, {"divergence", c.divergence_gate}};
    if (!c.out.empty()) j["output"] = c.out;
    return j.dump(2);
}

Field initial_data(const ExperimentConfig& c) {
    if (!c.file.empty()) {
        Field f = load_clf1(c.file);
        require(f.rank() == Rank::vector, "initial data file must hold a vector field");
        return f;
    }
    return make_family(make_grid(c.dim, c.n, c.box), c.family, c.amplitude, c.seed, c.alpha);
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
    Field u0 = initial_data(c);
    const Grid& g = u0.grid();
    SolverConfig sc = c.solver_cfg;
    sc.T = c.horizon;
    ExperimentResult r;
    DiagnosticsOptions dopt;
    dopt.lp_set = c.lp_set;
    dopt.besov_p = c.besov_p;
    dopt.besov_q = c.besov_q;
    dopt.t_end = c.horizon;

    try {
        switch (c.solver) {
        case Solver::direct: {
            ContinuationResult cr = continue_solution(u0, c.horizon, c.horizon,
                                                      c.horizon * c.min_step_fraction, sc);
            r.trajectory = cr.trajectory;
            r.steps = cr.steps;
            r.increments = cr.increments;
            r.integral_residual = cr.max_integral_residual;
            r.max_divergence = cr.max_divergence;
            if (cr.blowup_suspected) {
                r.status = RunStatus::blowup_suspected;
                dopt.t_end = cr.t_end;
                dopt.t_end_source = "continuation halt";
                char b[160];
                std::snprintf(b, sizeof b, "blow-up suspected: existence step fell below %.3g at t = %.6g",
                              c.horizon * c.min_step_fraction, cr.t_end);
                r.message = b;
            }
            break;
        }
        case Solver::split_perturbed: {
            SplitConfig spc = SplitConfig::make(g.dim(), c.split_p, c.split_q, c.split_lambda);
            SplitResult s = split(u0, spc, build_partition(g));
            SolveResult v = mild_solve_nse(s.V0, sc);
            SolveResult w = mild_solve_perturbed(s.U0, v.trajectory, sc);
            Trajectory u(g);
            for (std::size_t i = 0; i < v.trajectory.size(); ++i)
                u.push(v.trajectory.time(i), w.trajectory.field(i) + v.trajectory.field(i));
            r.trajectory = u;
            r.increments = {v.report.increments, w.report.increments};
            r.integral_residual = std::max(v.integral_residual, w.integral_residual);
            r.max_divergence = std::max(v.max_divergence, w.max_divergence);
            r.steps = {c.horizon};
            break;
        }
        case Solver::mollified: {
            MollifiedResult m = mollified_solve(u0, Trajectory(), Trajectory(), c.rho, sc);
            r.trajectory = m.solve.trajectory;
            r.increments = {m.solve.report.increments};
            r.integral_residual = m.solve.integral_residual;
            r.max_divergence = m.solve.max_divergence;
            r.energy_ledger_residual =
                m.ledger.energy_scale > 0 ? m.ledger.max_residual / m.ledger.energy_scale : 0.0;
            r.steps = {c.horizon};
            break;
        }
        }
    } catch (const PicardDivergence& e) {
        r.status = RunStatus::numerical_failure;
        r.message = e.what();
        r.increments.push_back(e.history());
        return r;
    }

    if (r.status == RunStatus::completed) {
        if (r.integral_residual > c.residual_gate * sc.tolerance) {
            r.status = RunStatus::numerical_failure;
            r.message = "integral-equation residual above the gate";
        } else if (r.max_divergence > c.divergence_gate) {
            r.status = RunStatus::numerical_failure;
            r.message = "divergence residual above the gate";
        } else {
            r.message = "completed horizon";
        }
    }
    r.report = diagnose(r.trajectory, dopt);

    if (c.file.empty() && c.family == "taylor-green" && c.solver != Solver::mollified) {
        // exact solution e^{-2 |xi|^2 t} u0 with |xi| = 2 pi / L
        const double rate = 2 * g.dk() * g.dk();
        double err = 0;
        for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
            Field ex = std::exp(-rate * r.trajectory.time(i)) * Field(u0);
            double n = l2_norm(ex);
            if (n > 0) err = std::max(err, l2_norm(r.trajectory.field(i) - ex) / n);
        }
        r.taylor_green_error = err;
    }
    return r;
}

std::string manifest_json(const ExperimentConfig& c, const ExperimentResult& r) {
    json j;
    j["format"] = "clab-archive-1";
    j["status"] = status_name(r.status);
    j["message"] = r.message;
    j["config"] = json::parse(config_json(c));
    j["times"] = r.trajectory.empty() ? std::vector<double>{} : r.trajectory.times();
    std::vector<std::string> files;
    for (std::size_t i = 0; i < r.trajectory.size(); ++i) files.push_back(series_name(i));
    j["files"] = files;
    j["residuals"] = {{"integral", r.integral_residual},
                      {"divergence", r.max_divergence},
                      {"energy_ledger", r.energy_ledger_residual},
                      {"taylor_green_error", r.taylor_green_error}};
    j["steps"] = r.steps;
    j["iterate_history"] = r.increments;
    j["t_end"] = r.report.t_end;
    j["t_end_source"] = r.report.t_end_source;
    return j.dump(2);
}

void write_archive(const std::string& dir, const ExperimentConfig& c, const ExperimentResult& r) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    require(fs::is_directory(dir), "cannot create output directory " + dir);
    for (std::size_t i = 0; i < r.trajectory.size(); ++i)
        save_clf1((fs::path(dir) / series_name(i)).string(), r.trajectory.field(i));
    if (!r.trajectory.empty()) {
        write_file_atomic((fs::path(dir) / "diagnostics.json").string(), diagnostics_json(r.report) + "\n");
        write_file_atomic((fs::path(dir) / "diagnostics.csv").string(), diagnostics_csv(r.report));
    }
    write_file_atomic((fs::path(dir) / "manifest.json").string(), manifest_json(c, r) + "\n");
}

Trajectory load_archive(const std::string& dir) {
    namespace fs = std::filesystem;
    std::ifstream is(fs::path(dir) / "manifest.json");
    require(static_cast<bool>(is), "no manifest.json in " + dir);
    std::stringstream ss;
    ss << is.rdbuf();
    json j;
    try {
        j = json::parse(ss.str());
    } catch (const json::exception&) {
        throw ValidationError("manifest.json is not valid JSON");
    }
    require(j.contains("times") && j.contains("files"), "manifest lacks times or files");
    auto times = j["times"].get<std::vector<double>>();
    auto files = j["files"].get<std::vector<std::string>>();
    require(times.size() == files.size() && !times.empty(), "manifest times and files disagree");
    Field f0 = load_clf1((fs::path(dir) / files[0]).string());
    Trajectory tr(f0.grid());
    tr.push(times[0], f0);
    for (std::size_t i = 1; i < files.size(); ++i) {
        Field f = load_clf1((fs::path(dir) / files[i]).string());
        require(f.grid() == tr.grid(), "archive fields live on different grids");
        tr.push(times[i], std::move(f));
    }
    return tr;
}

} // namespace clab
