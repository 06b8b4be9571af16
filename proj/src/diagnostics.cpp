#include "clab/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "clab/error.hpp"
#include "clab/fft.hpp"
#include "clab/spectral_ops.hpp"

namespace clab {

std::vector<double> leray_monitor(const Trajectory& u, double p, double t_end) {
    require(!u.empty(), "leray_monitor: empty trajectory");
    const int d = u.grid().dim();
    require(p > d, "leray_monitor: p must exceed the dimension");
    require(t_end >= u.t_end(), "leray_monitor: T_end precedes the last sample");
    const double e = std::isinf(p) ? 0.5 : 0.5 * (1 - d / p);
    std::vector<double> out;
    for (std::size_t i = 0; i < u.size(); ++i)
        out.push_back(lp_norm(u.field(i), p) * std::pow(t_end - u.time(i), e));
    return out;
}

RescaleSpec rescale_spec(double lambda, std::array<int, 3> shift, double t0, bool keep_box) {
    require(std::isfinite(lambda) && lambda > 0, "lambda must be positive");
    int e = 0;
    double mant = std::frexp(lambda, &e);
    require(mant == 0.5, "lambda must be a power of two (resampling is not supported)");
    RescaleSpec s;
    s.m = e - 1;
    s.shift = shift;
    s.t0 = t0;
    s.keep_box = keep_box;
    return s;
}

Field rescale(const Field& f, const RescaleSpec& s) {
    const Grid& g = f.grid();
    const double lam = std::ldexp(1.0, s.m);
    const double h = g.box() / g.n();
    // phase exp(i xi . x0) in the original variables
    auto phase = [&](std::size_t i) {
        double a = 0;
        for (int ax = 0; ax < g.dim(); ++ax) a += g.xi(i, ax) * s.shift[ax] * h;
        return cplx(std::cos(a), std::sin(a));
    };
    const bool shifted = s.shift[0] != 0 || s.shift[1] != 0 || s.shift[2] != 0;

    if (!s.keep_box) {
        Field out(with_box(g, g.box() / lam), f.rank());
        for (int c = 0; c < f.ncomp(); ++c) {
            const cplx* a = f.comp(c);
            cplx* b = out.comp(c);
            for (std::size_t i = 0; i < g.size(); ++i) b[i] = shifted ? lam * a[i] * phase(i) : lam * a[i];
        }
        return out;
    }

    Field out(g, f.rank());
    const int n = g.n();
    for (std::size_t i = 0; i < g.size(); ++i) {
        bool nz = false;
        for (int c = 0; c < f.ncomp(); ++c) nz = nz || f.at(c, i) != cplx(0, 0);
        if (!nz) continue;
        std::array<int, 3> k{0, 0, 0};
        for (int ax = 0; ax < g.dim(); ++ax) {
            int kk = g.k(i, ax);
            if (s.m >= 0) {
                kk *= 1 << s.m;
            } else {
                int div = 1 << -s.m;
                require(kk % div == 0, "rescale: mode does not map to an integer wavevector");
                kk /= div;
            }
            require(2 * std::abs(kk) < n, "rescale: mode leaves the grid; use keep_box = false");
            k[ax] = kk;
        }
        std::size_t j = g.index_of(k);
        for (int c = 0; c < f.ncomp(); ++c)
            out.at(c, j) = shifted ? lam * f.at(c, i) * phase(i) : lam * f.at(c, i);
    }
    return out;
}

Trajectory rescale(const Trajectory& tr, const RescaleSpec& s) {
    require(!tr.empty(), "rescale: empty trajectory");
    const double lam2 = std::ldexp(1.0, 2 * s.m);
    Trajectory out;
    bool first = true;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        if (tr.time(i) < s.t0) continue;
        Field f = rescale(tr.field(i), s);
        if (first) {
            out = Trajectory(f.grid());
            first = false;
        }
        out.push((tr.time(i) - s.t0) / lam2, std::move(f));
    }
    require(!first, "rescale: no samples at or after t0");
    return out;
}

std::vector<double> critical_norm_series(const Trajectory& tr, double p, double q) {
    require(!tr.empty(), "empty trajectory");
    DyadicPartition P = build_partition(tr.grid());
    BesovIndex idx = BesovIndex::critical(tr.grid().dim(), p, q);
    std::vector<double> out;
    for (const auto& f : tr.fields()) out.push_back(besov_norm(f, idx, P).value);
    return out;
}

std::vector<VanishingRow> vanishing_test(const Field& u, const std::vector<double>& lambdas) {
    const Grid& g = u.grid();
    const int d = g.dim();
    Mollifier bump = make_mollifier(d, 1.0);
    std::vector<VanishingRow> rows;
    for (double lam : lambdas) {
        require(lam >= 2 * g.box() / g.n(), "vanishing_test: lambda below grid resolution");
        require(lam <= g.box() / 2, "vanishing_test: lambda exceeds half the box");
        // psi = lambda^-2 phi(x / lambda); L^d psi_hat(k) = lambda^{d-2} phi_hat(lambda xi)
        std::vector<double> tab = radial_table(g, [&](double xi) {
            return std::pow(lam, d - 2) * bump.theta_hat(lam * xi);
        });
        const auto& k2 = g.tables().k2;
        VanishingRow r;
        r.lambda = lam;
        double mag2 = 0;
        for (int c = 0; c < u.ncomp(); ++c) {
            double s = 0;
            const cplx* a = u.comp(c);
            for (std::size_t i = 0; i < g.size(); ++i) s += a[i].real() * tab[k2[i]];
            r.pairing.push_back(s);
            mag2 += s * s;
        }
        r.magnitude = std::sqrt(mag2);
        rows.push_back(std::move(r));
    }
    return rows;
}

bool decays_over_last(const std::vector<VanishingRow>& rows, int count) {
    require(count >= 2 && static_cast<int>(rows.size()) >= count, "not enough pairings");
    std::vector<VanishingRow> v(rows.end() - count, rows.end());
    for (int i = 1; i < count; ++i) {
        require(v[i].lambda < v[i - 1].lambda, "pairings must be ordered by decreasing lambda");
        if (!(v[i].magnitude < v[i - 1].magnitude)) return false;
    }
    return true;
}

DiagnosticsReport diagnose(const Trajectory& u, const DiagnosticsOptions& opt) {
    require(!u.empty(), "diagnose: empty trajectory");
    const int d = u.grid().dim();
    DiagnosticsReport r;
    r.times = u.times();
    r.t_end = opt.t_end > 0 ? opt.t_end : u.t_end();
    r.t_end_source = opt.t_end_source;
    r.lp_exponents = opt.lp_set;
    for (double p : opt.lp_set) {
        std::vector<double> s;
        for (const auto& f : u.fields()) s.push_back(lp_norm(f, p));
        r.lp.push_back(std::move(s));
        if (p > d) {
            r.leray_exponents.push_back(p);
            r.leray.push_back(leray_monitor(u, p, r.t_end));
        }
    }
    r.besov = critical_norm_series(u, opt.besov_p, opt.besov_q);
    for (const auto& f : u.fields()) r.divergence.push_back(divergence_defect(f));
    r.energy_residual.push_back(0);
    r.energy_slack.push_back(0);
    if (u.size() >= 2) {
        EnergyLedger L = energy_ledger(u, opt.background);
        r.energy_residual.insert(r.energy_residual.end(), L.residual.begin(), L.residual.end());
        r.energy_slack.insert(r.energy_slack.end(), L.slack.begin(), L.slack.end());
        r.energy_scale = L.energy_scale;
    }
    return r;
}

namespace {

std::string p_label(double p) {
    if (std::isinf(p)) return "inf";
    char b[32];
    std::snprintf(b, sizeof b, "%g", p);
    return b;
}

std::string num(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

} // namespace

std::string diagnostics_json(const DiagnosticsReport& r) {
    nlohmann::ordered_json j;
    j["times"] = r.times;
    j["t_end"] = r.t_end;
    j["t_end_source"] = r.t_end_source;
    j["energy_scale"] = r.energy_scale;
    nlohmann::ordered_json lp = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < r.lp_exponents.size(); ++i) lp[p_label(r.lp_exponents[i])] = r.lp[i];
    j["lp"] = lp;
    j["besov_critical"] = r.besov;
    nlohmann::ordered_json le = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < r.leray_exponents.size(); ++i)
        le[p_label(r.leray_exponents[i])] = r.leray[i];
    j["leray_ratio"] = le;
    j["energy_residual"] = r.energy_residual;
    j["energy_slack"] = r.energy_slack;
    j["divergence"] = r.divergence;
    return j.dump(2);
}

std::string diagnostics_csv(const DiagnosticsReport& r) {
    std::ostringstream os;
    os << "t";
    for (double p : r.lp_exponents) os << ",lp_" << p_label(p);
    os << ",besov_critical";
    for (double p : r.leray_exponents) os << ",leray_" << p_label(p);
    os << ",energy_residual,energy_slack,divergence\n";
    for (std::size_t n = 0; n < r.times.size(); ++n) {
        os << num(r.times[n]);
        for (const auto& s : r.lp) os << ',' << num(s[n]);
        os << ',' << num(r.besov[n]);
        for (const auto& s : r.leray) os << ',' << num(s[n]);
        os << ',' << num(r.energy_residual[n]) << ',' << num(r.energy_slack[n]) << ','
           << num(r.divergence[n]) << '\n';
    }
    return os.str();
}

} // namespace clab
