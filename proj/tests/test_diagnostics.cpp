#include <cmath>
#include <filesystem>
#include <numbers>

#include "clab/diagnostics.hpp"
#include "clab/error.hpp"
#include "clab/experiment.hpp"
#include "clab/families.hpp"
#include "clab/heat.hpp"
#include "clab/spectral_ops.hpp"
#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

using namespace clab;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {
constexpr double kPi = std::numbers::pi;

Trajectory heat_trajectory(const Field& u0, const std::vector<double>& times) {
    Trajectory tr(u0.grid());
    for (double t : times) tr.push(t, heat_evolve(u0, t));
    return tr;
}

fs::path scratch_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("clab_test_" + name);
    fs::remove_all(p);
    return p;
}

// mass of bump(|x|) in three dimensions, Simpson in r
double bump_mass_3d() {
    const int n = 20000;
    double acc = 0;
    for (int i = 0; i <= n; ++i) {
        double r = double(i) / n;
        double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
        acc += w * r * r * oracle::bump(r);
    }
    return 4 * kPi * acc / (3.0 * n);
}
} // namespace

TEST_CASE("Leray monitor") {
    Grid g = make_grid(3, 16, 2 * kPi);
    Field u = power_law_random(g, 1.0, 3);
    Trajectory tr(g);
    for (double t : {0.0, 0.25, 0.5}) tr.push(t, u);
    auto m = leray_monitor(tr, 6, 1.0);
    double n6 = lp_norm(u, 6);
    CHECK(m[0] == Approx(n6 * std::pow(1.0, 0.25)));
    CHECK(m[1] == Approx(n6 * std::pow(0.75, 0.25)));
    CHECK(m[2] == Approx(n6 * std::pow(0.5, 0.25)));
    auto mi = leray_monitor(tr, kInf, 1.0);
    CHECK(mi[1] == Approx(lp_norm(u, kInf) * std::sqrt(0.75)));
    CHECK_THROWS_AS(leray_monitor(tr, 3, 1.0), ValidationError);
    CHECK_THROWS_AS(leray_monitor(tr, 6, 0.4), ValidationError);

    Grid h = make_grid(2, 16, 2 * kPi);
    Trajectory t2(h);
    t2.push(0, taylor_green_2d(h));
    CHECK(leray_monitor(t2, 4, 1.0)[0] == Approx(lp_norm(taylor_green_2d(h), 4) * std::pow(1.0, 0.25)));
}

TEST_CASE("rescaling against point values") {
    Grid g = make_grid(3, 16, 2 * kPi);
    Field u = power_law_random(g, 1.0, 6, Rank::vector, 3);
    std::array<int, 3> shift{1, -2, 3};
    RescaleSpec s = rescale_spec(2, shift);
    Field r = rescale(u, s);
    CHECK(r.grid().box() == Approx(kPi));
    RescaleSpec k = rescale_spec(2, shift, 0, true);
    Field rk = rescale(u, k);
    CHECK(rk.grid().box() == Approx(2 * kPi));
    for (std::array<int, 3> idx : {std::array<int, 3>{0, 0, 0}, {1, 2, 3}, {5, 7, 2}}) {
        std::array<int, 3> src, srck;
        for (int a = 0; a < 3; ++a) {
            src[a] = ((idx[a] + shift[a]) % 16 + 16) % 16;
            srck[a] = ((2 * idx[a] + shift[a]) % 16 + 16) % 16;
        }
        for (int c = 0; c < 3; ++c) {
            CHECK(oracle::point_value(r, c, idx) == Approx(2 * oracle::point_value(u, c, src)).epsilon(1e-12));
            CHECK(oracle::point_value(rk, c, idx) == Approx(2 * oracle::point_value(u, c, srck)).epsilon(1e-12));
        }
    }

    CHECK(rescale_spec(0.5).m == -1);
    CHECK_THROWS_AS(rescale_spec(3), ValidationError);
    CHECK_THROWS_AS(rescale_spec(-2), ValidationError);
    Field wide = single_mode(g, {5, 0, 0}, {cplx(0), cplx(1), cplx(0)});
    CHECK_THROWS_AS(rescale(wide, rescale_spec(2, {0, 0, 0}, 0, true)), ValidationError);
    CHECK_THROWS_AS(rescale(wide, rescale_spec(0.5, {0, 0, 0}, 0, true)), ValidationError);
}

TEST_CASE("critical norms are invariant under rescaling") {
    Grid g = make_grid(3, 16, 2 * kPi);
    Field u = power_law_random(g, 1.0, 2);
    auto times = std::vector<double>{0, 0.01, 0.02, 0.05, 0.1};
    Trajectory tr = heat_trajectory(u, times);
    auto base = critical_norm_series(tr, 4, 4);
    for (double lambda : {2.0, 4.0}) {
        Trajectory r = rescale(tr, rescale_spec(lambda, {2, 0, 1}));
        auto series = critical_norm_series(r, 4, 4);
        REQUIRE(series.size() == base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(series[i] == Approx(base[i]).epsilon(1e-12));
            CHECK(r.time(i) == Approx(times[i] / (lambda * lambda)));
        }
    }
    Trajectory late = rescale(tr, rescale_spec(2, {0, 0, 0}, 0.02));
    CHECK(late.size() == 3);
    CHECK(late.time(0) == 0);
    CHECK(late.time(2) == Approx(0.08 / 4));
    CHECK_THROWS_AS(rescale(tr, rescale_spec(2, {0, 0, 0}, 1.0)), ValidationError);
}

TEST_CASE("vanishing pairing against physical quadrature") {
    Grid g = make_grid(3, 32, 2 * kPi);
    Field u = power_law_random(g, 2.0, 4, Rank::vector, 5);
    const double mass = bump_mass_3d();
    std::vector<double> lambdas{kPi, kPi / 2, kPi / 4};
    auto rows = vanishing_test(u, lambdas);
    // band-limited data sampled on a 4x finer grid so the bump is resolved
    const int nf = 128;
    Grid fine = make_grid(3, nf, 2 * kPi);
    Field uf(fine, Rank::vector);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (int c = 0; c < 3; ++c)
            if (u.at(c, i) != cplx(0)) uf.at(c, fine.index_of({g.k(i, 0), g.k(i, 1), g.k(i, 2)})) = u.at(c, i);
    Physical vals = to_physical(uf);
    const double h = fine.box() / nf;
    for (std::size_t n = 0; n < lambdas.size(); ++n) {
        double lam = lambdas[n];
        std::vector<double> direct(3, 0.0);
        for (int i = 0; i < nf; ++i)
            for (int j = 0; j < nf; ++j)
                for (int l = 0; l < nf; ++l) {
                    auto wrap = [&](int a) { return (a > nf / 2 ? a - nf : a) * h; };
                    double x = wrap(i), y = wrap(j), z = wrap(l);
                    double r = std::sqrt(x * x + y * y + z * z) / lam;
                    if (r >= 1) continue;
                    double w = oracle::bump(r) / (mass * lam * lam * lam);
                    std::size_t p = (static_cast<std::size_t>(i) * nf + j) * nf + l;
                    for (int c = 0; c < 3; ++c) direct[c] += vals[c][p] * w;
                }
        for (int c = 0; c < 3; ++c) {
            // lambda^{-2} phi(x / lambda) with phi of unit mass: lambda^{d-2} x the local average
            double expect = direct[c] * h * h * h * lam;
            CHECK(rows[n].pairing[c] == Approx(expect).epsilon(1e-5).scale(1e-3));
        }
    }
    CHECK(decays_over_last(rows, 3));
    CHECK_THROWS_AS(vanishing_test(u, {0.1}), ValidationError);
    CHECK_THROWS_AS(vanishing_test(u, {4.0}), ValidationError);
    std::vector<VanishingRow> up = vanishing_test(u, {kPi / 4, kPi / 2, kPi});
    CHECK_THROWS_AS(decays_over_last(up, 3), ValidationError);
}

TEST_CASE("diagnostics report") {
    Grid g = make_grid(3, 16, 2 * kPi);
    Field u = power_law_random(g, 1.0, 9);
    SolverConfig cfg;
    cfg.T = 0.5;
    cfg.uniform = 8;
    Trajectory tr = heat_trajectory(u, cfg.schedule());
    DiagnosticsOptions opt;
    DiagnosticsReport r = diagnose(tr, opt);
    CHECK(r.times == tr.times());
    CHECK(r.lp.size() == 3);
    for (const auto& s : r.lp) CHECK(s.size() == tr.size());
    CHECK(r.leray_exponents == std::vector<double>{4, 6, kInf});
    CHECK(r.leray.back().back() == 0);
    CHECK(r.t_end == 0.5);
    for (double x : r.energy_residual) CHECK(x >= 0);
    for (double x : r.divergence) CHECK(x < 1e-12);
    CHECK(r.energy_residual.front() == 0);
    CHECK(r.besov[0] == Approx(besov_norm(u, BesovIndex::critical(3, 4, 4), build_partition(g)).value));

    opt.lp_set = {2, 3};
    DiagnosticsReport r2 = diagnose(tr, opt);
    CHECK(r2.leray_exponents.empty());

    auto j = nlohmann::json::parse(diagnostics_json(r));
    CHECK(j["times"].size() == tr.size());
    CHECK(j.contains("leray_ratio"));
    CHECK(j["t_end_source"] == "horizon");
    std::string csv = diagnostics_csv(r);
    CHECK(csv.rfind("t,lp_4,lp_6,lp_inf,besov_critical,leray_4,leray_6,leray_inf,energy_residual,"
                    "energy_slack,divergence\n",
                    0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(tr.size()) + 1);
}

TEST_CASE("experiment configuration") {
    std::string text = R"({"clab_config": 1,
        "grid": {"dim": 3, "n": 16, "box": 6.283185307179586},
        "initial": {"family": "power-law", "amplitude": 0.01, "seed": 5, "alpha": 1.5},
        "horizon": 0.5, "solver": "split-perturbed",
        "schedule": {"J": 18, "uniform": 8, "substeps": 2},
        "picard": {"tolerance": 1e-11, "max_iterations": 30, "kato_p": 6},
        "rho": 0.2, "split": {"p": 4, "q": "inf", "lambda": 0.5},
        "continuation": {"min_step_fraction": 0.125},
        "diagnostics": {"lp": [4, "inf"], "besov_p": 6, "besov_q": 2},
        "gates": {"residual": 20, "divergence": 1e-9}, "output": "runs/a"})";
    ExperimentConfig c = parse_config(text);
    CHECK(c.n == 16);
    CHECK(c.family == "power-law");
    CHECK(c.solver == Solver::split_perturbed);
    CHECK(c.solver_cfg.substeps == 2);
    CHECK(c.solver_cfg.kato_p == 6);
    CHECK(std::isinf(c.split_q));
    CHECK(std::isinf(c.lp_set[1]));
    CHECK(c.out == "runs/a");
    ExperimentConfig back = parse_config(config_json(c));
    CHECK(config_json(back) == config_json(c));

    CHECK_THROWS_AS(parse_config(R"({"grid": {"n": 16}})"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"clab_config": 2})"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"clab_config": 1, "gird": {}})"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"clab_config": 1, "solver": "rk4"})"), ValidationError);
    CHECK_THROWS_AS(parse_config("{not json"), ValidationError);
}

TEST_CASE("Taylor-Green experiment and archive round trip") {
    ExperimentConfig c;
    c.dim = 2;
    c.n = 32;
    c.horizon = 0.5;
    c.solver_cfg.uniform = 8;
    ExperimentResult r = run_experiment(c);
    CHECK(r.status == RunStatus::completed);
    CHECK(r.taylor_green_error < 1e-8);
    CHECK(r.integral_residual < 10 * c.solver_cfg.tolerance);
    // no blow-up: the Leray ratio decays
    const auto& le = r.report.leray[0];
    CHECK(le.back() < le.front());
    for (double x : r.report.energy_residual) CHECK(x < 1e-6 * r.report.energy_scale);

    fs::path dir = scratch_dir("tg");
    write_archive(dir.string(), c, r);
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(fs::exists(dir / "diagnostics.json"));
    CHECK(fs::exists(dir / "diagnostics.csv"));
    Trajectory back = load_archive(dir.string());
    REQUIRE(back.size() == r.trajectory.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back.time(i) == r.trajectory.time(i));
        CHECK(rel_diff(back.field(i), r.trajectory.field(i)) == 0);
    }
    auto m = nlohmann::json::parse(manifest_json(c, r));
    CHECK(m["format"] == "clab-archive-1");
    CHECK(m["status"] == "completed");
    CHECK(m["times"].size() == back.size());
    fs::remove_all(dir);
    CHECK_THROWS_AS(load_archive(dir.string()), ValidationError);
}

TEST_CASE("split-perturbed and mollified experiments") {
    ExperimentConfig c;
    c.dim = 3;
    c.n = 16;
    c.family = "power-law";
    c.alpha = 1;
    c.amplitude = 0.05;
    c.horizon = 0.5;
    c.solver_cfg.uniform = 8;
    c.solver = Solver::split_perturbed;
    c.split_lambda = 0.2;
    ExperimentResult s = run_experiment(c);
    CHECK(s.status == RunStatus::completed);
    c.solver = Solver::direct;
    ExperimentResult d = run_experiment(c);
    REQUIRE(d.trajectory.size() == s.trajectory.size());
    double worst = 0;
    for (std::size_t i = 0; i < d.trajectory.size(); ++i)
        worst = std::max(worst, rel_diff(s.trajectory.field(i), d.trajectory.field(i)));
    CHECK(worst < 1e-6);

    c.solver = Solver::mollified;
    c.solver_cfg.uniform = SolverConfig{}.uniform;
    c.alpha = 2;
    c.rho = 0.2;
    ExperimentResult m = run_experiment(c);
    CHECK(m.status == RunStatus::completed);
    CHECK(m.energy_ledger_residual >= 0);
    CHECK(m.energy_ledger_residual < 1e-6 * m.report.energy_scale);

    c.solver = Solver::direct;
    c.amplitude = 3000;
    c.alpha = 1;
    c.horizon = 0.1;
    c.min_step_fraction = 0.5;
    ExperimentResult b = run_experiment(c);
    CHECK(b.status == RunStatus::blowup_suspected);
}
