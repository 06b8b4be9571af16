#include "clab/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "clab/calderon.hpp"
#include "clab/clf1.hpp"
#include "clab/diagnostics.hpp"
#include "clab/error.hpp"
#include "clab/experiment.hpp"
#include "clab/families.hpp"
#include "clab/heat.hpp"
#include "clab/spectral_ops.hpp"

namespace clab {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Globals {
    int grid = 0;       // 0: command default
    double box = 0;     // 0: 2 pi
    int dim = 3;
    std::string config;
    std::string out = ".";
    std::string format = "json";
};

double parse_exponent(const std::string& s) {
    if (s == "inf" || s == "infinity") return kInf;
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        require(pos == s.size(), "bad exponent '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ValidationError("bad exponent '" + s + "'");
    }
}

json num(double v) { return std::isfinite(v) ? json(v) : json(std::isinf(v) ? "inf" : "nan"); }

std::string read_text(const std::string& path) {
    std::ifstream is(path);
    require(static_cast<bool>(is), "cannot read " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Grid global_grid(const Globals& g, int default_n) {
    int n = g.grid > 0 ? g.grid : default_n;
    double L = g.box > 0 ? g.box : 2 * std::numbers::pi;
    return make_grid(g.dim, n, L);
}

// --in FILE or --family NAME on the global grid
Field load_input(const Globals& g, const std::string& in, const std::string& family, double amp,
                 std::uint64_t seed, double alpha, int default_n) {
    if (!in.empty()) return load_clf1(in);
    require(!family.empty(), "need --in FILE or --family NAME");
    return make_family(global_grid(g, default_n), family, amp, seed, alpha);
}

std::string out_path(const Globals& g, const std::string& name) {
    std::error_code ec;
    fs::create_directories(g.out, ec);
    require(fs::is_directory(g.out), "cannot create output directory " + g.out);
    return (fs::path(g.out) / name).string();
}

json norm_json(const NormReport& r) {
    json j;
    j["s"] = r.index.s;
    j["p"] = num(r.index.p);
    j["q"] = num(r.index.q);
    j["value"] = r.value;
    j["truncated"] = r.truncated;
    json b = json::array();
    for (const auto& v : r.blocks) b.push_back({{"j", v.j}, {"contrib", v.contrib}, {"truncated", v.truncated}});
    j["blocks"] = b;
    return j;
}

void emit(std::ostream& out, const Globals& g, const json& j, const std::string& csv) {
    if (g.format == "csv")
        out << csv;
    else
        out << j.dump(2) << "\n";
}

int cmd_partition_check(const Globals& g, std::ostream& out) {
    Grid grid = global_grid(g, 64);
    DyadicPartition P = build_partition(grid);
    double defect = P.identity_defect();
    // support: phi must vanish outside [3/4, 8/3]
    double leak = 0;
    for (int i = 0; i <= 4000; ++i) {
        double r = 4.0 * i / 4000;
        if (r < 0.75 || r > 8.0 / 3) leak = std::max(leak, std::abs(lp_phi(r)));
    }
    bool ok = defect < 1e-10 && leak < 1e-14;
    json j{{"grid", grid.n()}, {"dim", grid.dim()}, {"j_min", P.j_min()}, {"j_max", P.j_max()},
           {"identity_defect", defect}, {"support_leak", leak}, {"pass", ok}};
    char csv[200];
    std::snprintf(csv, sizeof csv, "grid,dim,j_min,j_max,identity_defect,support_leak,pass\n%d,%d,%d,%d,%.17g,%.17g,%d\n",
                  grid.n(), grid.dim(), P.j_min(), P.j_max(), defect, leak, ok ? 1 : 0);
    emit(out, g, j, csv);
    return ok ? exit_ok : exit_gate;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"clab: Besov norms, Calderon splitting and mild Navier-Stokes solutions on periodic grids"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--grid", g.grid, "points per axis");
    app.add_option("--box", g.box, "box length (default 2 pi)");
    app.add_option("--dim", g.dim, "dimension for generated data")->check(CLI::IsMember({2, 3}));
    app.add_option("--config", g.config, "JSON experiment config");
    app.add_option("--out", g.out, "output directory");
    app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.fallthrough();

    // shared input options
    std::string in, family;
    double amp = 1, alpha = 2;
    std::uint64_t seed = 1;
    auto add_input = [&](CLI::App* s) {
        s->add_option("--in", in, "CLF1 input field");
        s->add_option("--family", family, "named family: taylor-green, abc, power-law, critical-singular, zero");
        s->add_option("--amplitude", amp, "family amplitude");
        s->add_option("--seed", seed, "family seed");
        s->add_option("--alpha", alpha, "power-law spectral slope");
    };

    auto* pc = app.add_subcommand("partition-check", "partition identity and support on a grid");

    auto* nm = app.add_subcommand("norm", "Besov norm of a field with block breakdown");
    add_input(nm);
    std::string s_str, p_str = "4", q_str;
    bool caloric = false;
    nm->add_option("--s", s_str, "smoothness (default critical)");
    nm->add_option("--p", p_str, "integrability");
    nm->add_option("--q", q_str, "summability (default p)");
    nm->add_flag("--caloric", caloric, "also report the heat-flow (caloric) norm");

    auto* sp = app.add_subcommand("split", "split data into an L^2 part and a small subcritical part");
    add_input(sp);
    std::string sp_p = "4", sp_q = "8";
    double lambda = 1;
    sp->add_option("--p", sp_p, "critical exponent p");
    sp->add_option("--q", sp_q, "subcritical exponent q");
    sp->add_option("--lambda", lambda, "threshold scale");

    auto* sw = app.add_subcommand("sweep", "threshold sweep and exponent fits");
    add_input(sw);
    double lmin = 1e-2, lmax = 1e2;
    int lcount = 17;
    sw->add_option("--p", sp_p, "critical exponent p");
    sw->add_option("--q", sp_q, "subcritical exponent q");
    sw->add_option("--lambda-min", lmin);
    sw->add_option("--lambda-max", lmax);
    sw->add_option("--count", lcount, "number of lambda values");

    auto* hv = app.add_subcommand("heat-verify", "Kato-estimate battery and block decay slopes");
    double hv_T = 1;
    hv->add_option("--T", hv_T, "horizon");
    hv->add_option("--seed", seed, "battery seed");

    auto* so = app.add_subcommand("solve", "run an experiment and write its archive");
    add_input(so);
    double T = -1;
    std::string solver;
    so->add_option("--T", T, "horizon");
    so->add_option("--solver", solver, "direct, split-perturbed or mollified");

    auto* rs = app.add_subcommand("rescale", "u -> lambda u(lambda x + x0) by exact reindexing");
    add_input(rs);
    double rs_lambda = 2;
    std::vector<int> shift;
    bool keep_box = false;
    std::string rs_archive;
    double t0 = 0;
    rs->add_option("--lambda", rs_lambda, "power of two");
    rs->add_option("--shift", shift, "grid-point translation")->expected(0, 3)->delimiter(',');
    rs->add_flag("--keep-box", keep_box, "move modes on the same grid instead of shrinking the box");
    rs->add_option("--archive", rs_archive, "rescale a trajectory archive instead of one field");
    rs->add_option("--t0", t0, "time origin for trajectories");

    auto* va = app.add_subcommand("vanish", "pairings with shrinking bumps");
    add_input(va);
    std::vector<double> lambdas;
    va->add_option("--lambdas", lambdas, "bump scales (default powers of two)")->delimiter(',');

    auto* rp = app.add_subcommand("report", "diagnostics of an archived trajectory");
    std::string archive;
    double t_end = 0;
    rp->add_option("--archive", archive, "archive directory")->required();
    rp->add_option("--T-end", t_end, "reference end time (default last sample)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return exit_validation;
    }

    try {
        if (*pc) return cmd_partition_check(g, out);

        if (*nm) {
            Field f = load_input(g, in, family, amp, seed, alpha, 32);
            double p = parse_exponent(p_str);
            double q = q_str.empty() ? p : parse_exponent(q_str);
            BesovIndex idx{s_str.empty() ? critical_exponent(f.grid().dim(), p) : std::stod(s_str), p, q};
            NormReport r = besov_norm(f, idx, build_partition(f.grid()));
            json j = norm_json(r);
            std::ostringstream csv;
            csv.precision(17);
            csv << "j,contrib,truncated\n";
            for (const auto& b : r.blocks) csv << b.j << ',' << b.contrib << ',' << (b.truncated ? 1 : 0) << '\n';
            if (caloric) j["caloric"] = caloric_norm(f, idx);
            emit(out, g, j, csv.str());
            return exit_ok;
        }

        if (*sp) {
            Field f = load_input(g, in, family, amp, seed, alpha, 32);
            SplitConfig cfg = SplitConfig::make(f.grid().dim(), parse_exponent(sp_p), parse_exponent(sp_q), lambda);
            SplitResult r = split(f, cfg, build_partition(f.grid()));
            save_clf1(out_path(g, "U0.clf1"), r.U0);
            save_clf1(out_path(g, "V0.clf1"), r.V0);
            json j{{"p", num(cfg.p)},          {"q", num(cfg.q)},         {"theta", cfg.theta},
                   {"s", cfg.s},               {"eps", cfg.eps},          {"lambda", r.lambda},
                   {"critical_norm", r.critical_norm},
                   {"norm_U_L2", r.norm_U},    {"norm_V_besov", r.norm_V},
                   {"const_U", r.const_U},     {"const_V", r.const_V},    {"reassembly", r.reassembly},
                   {"div_U", r.div_U},         {"div_V", r.div_V},        {"thresholds", r.thresholds}};
            write_file_atomic(out_path(g, "split.json"), j.dump(2) + "\n");
            char csv[256];
            std::snprintf(csv, sizeof csv, "lambda,norm_U_L2,norm_V_besov,reassembly\n%.17g,%.17g,%.17g,%.17g\n",
                          r.lambda, r.norm_U, r.norm_V, r.reassembly);
            emit(out, g, j, csv);
            return exit_ok;
        }

        if (*sw) {
            Field f = load_input(g, in, family, amp, seed, alpha, 32);
            require(lcount >= 4 && lmin > 0 && lmax > lmin, "bad lambda range");
            std::vector<double> ls;
            for (int i = 0; i < lcount; ++i) ls.push_back(lmin * std::pow(lmax / lmin, double(i) / (lcount - 1)));
            SplitConfig cfg = SplitConfig::make(f.grid().dim(), parse_exponent(sp_p), parse_exponent(sp_q), 1);
            SweepReport r = exponent_sweep(f, cfg, ls, build_partition(f.grid()));
            json j{{"lambdas", r.lambdas},   {"norm_U", r.norm_U},   {"norm_V", r.norm_V},
                   {"slope_U", r.slope_U},   {"slope_V", r.slope_V}, {"resid_U", r.resid_U},
                   {"resid_V", r.resid_V},   {"mid_U", r.mid_U},     {"mid_V", r.mid_V},
                   {"expected_U", 1 - cfg.p / 2},
                   {"expected_V", std::isinf(cfg.q) ? 1.0 : 1 - cfg.p / cfg.q},
                   {"max_reassembly", r.max_reassembly}, {"degenerate", r.degenerate}};
            std::ostringstream csv;
            csv.precision(17);
            csv << "lambda,norm_U,norm_V\n";
            for (std::size_t i = 0; i < ls.size(); ++i) csv << ls[i] << ',' << r.norm_U[i] << ',' << r.norm_V[i] << '\n';
            emit(out, g, j, csv.str());
            return exit_ok;
        }

        if (*hv) {
            Grid grid = global_grid(g, 16);
            Field w = power_law_random(grid, 1.0, seed);
            Field F0 = dealias_product(w, w);
            const KatoExponents cfgs[3] = {{-1, 2, 4}, {-1.5, 2, 3}, {-0.5, 3, 6}};
            std::vector<EstimateRow> rows;
            bool ok = true;
            for (const auto& e : cfgs) {
                PowerLawSource F(F0, e.s1 / 2);
                EstimateRow r = verify_kato_estimate(F, e, hv_T);
                ok = ok && std::isfinite(r.constant) && std::abs(r.refinement_ratio() - 1) < 0.2;
                rows.push_back(r);
            }
            bool refused = false;
            try {
                check_kato_exponents({-1, 1.5, 3}, grid.dim());
            } catch (const ValidationError&) {
                refused = true;
            }
            ok = ok && (grid.dim() != 3 || refused);
            DyadicPartition P = build_partition(grid);
            json decay = json::array();
            for (int j = P.j_min(); j <= P.j_max(); ++j) {
                if (P.truncated(j)) continue;
                double s = block_decay_slope(w, j, P);
                double a = std::ldexp(1.0, 2 * j);
                bool in = s >= -(64.0 / 9) * a * (1 + 1e-9) && s <= -(9.0 / 16) * a * (1 - 1e-9);
                ok = ok && in;
                decay.push_back({{"j", j}, {"slope", s}, {"lo", -(64.0 / 9) * a}, {"hi", -(9.0 / 16) * a}, {"pass", in}});
            }
            json jr = json::array();
            for (const auto& r : rows)
                jr.push_back({{"s1", r.s1}, {"p1", r.p1}, {"p2", r.p2}, {"s2", r.s2}, {"constant", r.constant},
                              {"refined", r.refined}, {"ratio", r.refinement_ratio()}});
            json j{{"estimates", jr}, {"refuses_boundary", refused}, {"decay", decay}, {"pass", ok}};
            emit(out, g, j, estimate_csv(rows));
            return ok ? exit_ok : exit_gate;
        }

        if (*so) {
            ExperimentConfig c;
            if (!g.config.empty()) c = parse_config(read_text(g.config));
            if (g.grid > 0) c.n = g.grid;
            if (g.box > 0) c.box = g.box;
            if (!in.empty()) c.file = in;
            if (!family.empty()) {
                c.family = family;
                c.file.clear();
                if (family == "taylor-green" && g.config.empty()) c.dim = 2;
            }
            if (app.count("--dim")) c.dim = g.dim;
            if (so->count("--amplitude")) c.amplitude = amp;
            if (so->count("--seed")) c.seed = seed;
            if (so->count("--alpha")) c.alpha = alpha;
            if (T > 0) c.horizon = T;
            if (!solver.empty()) {
                ExperimentConfig tmp = parse_config("{\"clab_config\":1,\"solver\":\"" + solver + "\"}");
                c.solver = tmp.solver;
            }
            if (app.count("--out")) c.out = g.out;
            if (c.out.empty()) c.out = g.out;
            ExperimentResult r = run_experiment(c);
            write_archive(c.out, c, r);
            out << manifest_json(c, r) << "\n";
            if (r.status == RunStatus::blowup_suspected) {
                err << r.message << "\n";
                return exit_divergence;
            }
            if (r.status == RunStatus::numerical_failure) {
                err << r.message << "\n";
                return r.message.find("diverged") != std::string::npos ? exit_divergence : exit_gate;
            }
            return exit_ok;
        }

        if (*rs) {
            std::array<int, 3> sh{0, 0, 0};
            for (std::size_t i = 0; i < shift.size() && i < 3; ++i) sh[i] = shift[i];
            RescaleSpec spec = rescale_spec(rs_lambda, sh, t0, keep_box);
            if (!rs_archive.empty()) {
                Trajectory tr = load_archive(rs_archive);
                Trajectory r = rescale(tr, spec);
                auto before = critical_norm_series(tr, 4, 4);
                auto after = critical_norm_series(r, 4, 4);
                ExperimentConfig c;
                c.n = r.grid().n();
                c.dim = r.grid().dim();
                c.box = r.grid().box();
                c.family = "rescaled";
                ExperimentResult er;
                er.trajectory = r;
                er.message = "rescaled archive";
                er.report = diagnose(r, DiagnosticsOptions{});
                write_archive(g.out, c, er);
                json j{{"lambda", rs_lambda}, {"times", r.times()}, {"critical_before", before}, {"critical_after", after}};
                emit(out, g, j, diagnostics_csv(er.report));
                return exit_ok;
            }
            Field f = load_input(g, in, family, amp, seed, alpha, 32);
            Field r = rescale(f, spec);
            save_clf1(out_path(g, "rescaled.clf1"), r);
            const double p = 4;
            auto crit = [&](const Field& x) {
                return besov_norm(x, BesovIndex::critical(x.grid().dim(), p, p), build_partition(x.grid())).value;
            };
            double b = crit(f), a = crit(r);
            json j{{"lambda", rs_lambda}, {"box", r.grid().box()}, {"critical_before", b}, {"critical_after", a},
                   {"relative_change", b > 0 ? std::abs(a - b) / b : std::abs(a)}};
            char csv[200];
            std::snprintf(csv, sizeof csv, "lambda,critical_before,critical_after\n%.17g,%.17g,%.17g\n", rs_lambda, b, a);
            emit(out, g, j, csv);
            return exit_ok;
        }

        if (*va) {
            Field f = load_input(g, in, family, amp, seed, alpha, 32);
            if (lambdas.empty()) {
                const double L = f.grid().box();
                for (double l = L / 2; l >= 2 * L / f.grid().n() * (1 - 1e-12); l /= 2) lambdas.push_back(l);
            }
            auto rows = vanishing_test(f, lambdas);
            json jr = json::array();
            std::ostringstream csv;
            csv.precision(17);
            csv << "lambda,magnitude\n";
            for (const auto& r : rows) {
                jr.push_back({{"lambda", r.lambda}, {"pairing", r.pairing}, {"magnitude", r.magnitude}});
                csv << r.lambda << ',' << r.magnitude << '\n';
            }
            emit(out, g, json{{"pairings", jr}}, csv.str());
            return exit_ok;
        }

        if (*rp) {
            Trajectory tr = load_archive(archive);
            DiagnosticsOptions o;
            o.t_end = t_end;
            o.t_end_source = t_end > 0 ? "given" : "last sample";
            DiagnosticsReport r = diagnose(tr, o);
            std::string js = diagnostics_json(r), cs = diagnostics_csv(r);
            write_file_atomic(out_path(g, "report.json"), js + "\n");
            write_file_atomic(out_path(g, "report.csv"), cs);
            if (g.format == "csv")
                out << cs;
            else
                out << js << "\n";
            return exit_ok;
        }
    } catch (const PicardDivergence& e) {
        err << "error: " << e.what() << "\n";
        return exit_divergence;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    }
    return exit_validation;
}

int cli_main(int argc, const char* const* argv) { return cli_main(argc, argv, std::cout, std::cerr); }

} // namespace clab
