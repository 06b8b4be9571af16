#include <cmath>

#include "clab/besov.hpp"
#include "clab/error.hpp"
#include "clab/spectral_ops.hpp"

namespace clab {

std::vector<std::pair<double, double>> kato_decay_profile(const Trajectory& tr, double s, double p) {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        double t = tr.time(i);
        if (t <= 0) continue;
        out.emplace_back(t, std::pow(t, -0.5 * s) * lp_norm(tr.field(i), p));
    }
    return out;
}

namespace {

double log_time_norm(const std::vector<std::pair<double, double>>& prof, double q) {
    if (prof.empty()) return 0;
    if (std::isinf(q)) {
        double m = 0;
        for (const auto& [t, v] : prof) m = std::max(m, v);
        return m;
    }
    double acc = 0;
    for (std::size_t i = 1; i < prof.size(); ++i) {
        double h = std::log(prof[i].first / prof[i - 1].first);
        acc += 0.5 * h * (std::pow(prof[i - 1].second, q) + std::pow(prof[i].second, q));
    }
    return std::pow(acc, 1.0 / q);
}

} // namespace

NormReport kato_norm(const Trajectory& tr, const BesovIndex& idx) {
    require(!tr.empty(), "kato_norm: empty trajectory");
    require(idx.q >= 1, "time exponent must be at least 1");
    NormReport r;
    r.index = idx;
    r.value = log_time_norm(kato_decay_profile(tr, idx.s, idx.p), idx.q);
    return r;
}

double caloric_norm(const Field& u0, const BesovIndex& idx, double per_efold) {
    require(idx.s < 0, "caloric characterization needs s < 0");
    const Grid& g = u0.grid();
    const double t_lo = 1e-4 / (g.xi_max() * g.xi_max());
    const double t_hi = 40.0 / (g.xi_min() * g.xi_min());
    std::vector<std::pair<double, double>> prof;
    for (double t : log_times(t_lo, t_hi, per_efold)) {
        Field h = apply_radial(u0, [t](double xi) { return std::exp(-xi * xi * t); });
        prof.emplace_back(t, std::pow(t, -0.5 * idx.s) * lp_norm(h, idx.p));
    }
    if (std::isinf(idx.q)) return log_time_norm(prof, idx.q);
    double body = std::pow(log_time_norm(prof, idx.q), idx.q);
    // below t_lo the heat flow is frozen: int_0^t_lo (c t^{-s/2})^q dt/t
    double tail = std::pow(prof.front().second, idx.q) / (-0.5 * idx.s * idx.q);
    return std::pow(body + tail, 1.0 / idx.q);
}

} // namespace clab
