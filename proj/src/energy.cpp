#include <cmath>

#include "clab/besov.hpp"
#include "clab/error.hpp"

namespace clab {

namespace {

// int_0^T v dt from samples; a first sample after 0 is held constant back to 0.
double integrate_from_zero(const std::vector<double>& t, const std::vector<double>& v) {
    double acc = integrate_positive(t, v);
    if (t.front() > 0) acc += t.front() * v.front();
    return acc;
}

std::pair<std::vector<double>, std::vector<double>> every_other(const std::vector<double>& t,
                                                                const std::vector<double>& v) {
    std::vector<double> th, vh;
    for (std::size_t i = 0; i < t.size(); i += 2) {
        th.push_back(t[i]);
        vh.push_back(v[i]);
    }
    if (th.back() != t.back()) {
        th.push_back(t.back());
        vh.push_back(v.back());
    }
    return {th, vh};
}

} // namespace

NormReport timespace_besov_norm(const Trajectory& tr, double r, const BesovIndex& idx,
                                const DyadicPartition& P) {
    require(!tr.empty(), "timespace_besov_norm: empty trajectory");
    require(r >= 1, "time exponent must be at least 1");
    const std::size_t M = tr.size();
    const int nb = P.count();
    std::vector<std::vector<double>> series(nb, std::vector<double>(M));
    for (std::size_t i = 0; i < M; ++i) {
        auto n = block_lp_norms(tr.field(i), P, idx.p);
        for (int b = 0; b < nb; ++b) series[b][i] = n[b];
    }
    NormReport rep;
    rep.index = idx;
    rep.index.r = r;
    for (int b = 0; b < nb; ++b) {
        int j = P.j_min() + b;
        double val;
        if (std::isinf(r)) {
            val = 0;
            for (double x : series[b]) val = std::max(val, x);
        } else {
            require(M >= 3, "timespace norm needs at least 3 samples");
            std::vector<double> w(M);
            for (std::size_t i = 0; i < M; ++i) w[i] = std::pow(series[b][i], r);
            double full = integrate_from_zero(tr.times(), w);
            auto [th, wh] = every_other(tr.times(), w);
            double half = integrate_from_zero(th, wh);
            double est = std::abs(full - half) / 3.0;
            if (full > 0 && est > 0.01 * full)
                throw ValidationError("time quadrature under-resolved for block " + std::to_string(j));
            val = std::pow(full, 1.0 / r);
        }
        rep.blocks.push_back({j, std::pow(2.0, j * idx.s) * val, P.truncated(j)});
    }
    aggregate(rep);
    return rep;
}

double energy_norm(const Trajectory& tr) {
    if (tr.empty()) return 0;
    const Grid& g = tr.grid();
    double sup = 0;
    for (const auto& f : tr.fields()) sup = std::max(sup, l2_norm_sq(f));
    // per-mode exponential fit of |xi|^2 |c|^2 between samples
    double integral = 0;
    const double scale = g.dk() * g.dk() * g.volume();
    for (std::size_t i = 1; i < tr.size(); ++i) {
        const Field& a = tr.field(i - 1);
        const Field& b = tr.field(i);
        double h = tr.time(i) - tr.time(i - 1);
        double acc = 0;
        for (int c = 0; c < a.ncomp(); ++c) {
            const cplx* pa = a.comp(c);
            const cplx* pb = b.comp(c);
            for (std::size_t k = 0; k < g.size(); ++k) {
                auto k2 = g.k2(k);
                if (k2 == 0) continue;
                double x = std::norm(pa[k]), y = std::norm(pb[k]);
                if (x == 0 && y == 0) continue;
                acc += k2 * log_mean_step(x, y, h);
            }
        }
        integral += acc * scale;
    }
    return sup + 2 * integral;
}

double interpolation_check(const Trajectory& tr, double m, double n) {
    require(m >= 2 && n >= 2, "interpolation exponents must be at least 2");
    if (tr.empty()) return 0;
    const int d = tr.grid().dim();
    double lhs = (std::isinf(m) ? 0.0 : 2.0 / m) + d / n;
    require(std::abs(lhs - 0.5 * d) <= 1e-12, "exponents violate 2/m + d/n = d/2");
    double e = energy_norm(tr);
    if (e == 0) return 0;
    std::vector<double> v(tr.size());
    for (std::size_t i = 0; i < tr.size(); ++i) v[i] = lp_norm(tr.field(i), n);
    double num;
    if (std::isinf(m)) {
        num = 0;
        for (double x : v) num = std::max(num, x);
    } else {
        for (double& x : v) x = std::pow(x, m);
        num = std::pow(integrate_positive(tr.times(), v), 1.0 / m);
    }
    return num / std::sqrt(e);
}

} // namespace clab
