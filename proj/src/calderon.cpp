#include "clab/calderon.hpp"

#include <algorithm>
#include <cmath>

#include "clab/error.hpp"
#include "clab/simd.hpp"
#include "clab/spectral_ops.hpp"

namespace clab {

SplitConfig SplitConfig::make(int dim, double p, double q, double lambda) {
    require(dim == 2 || dim == 3, "split: dim must be 2 or 3");
    require(p > dim && q > p, "split: need dim < p < q");
    require(std::isfinite(lambda) && lambda > 0, "split: lambda must be positive");
    SplitConfig c;
    c.dim = dim;
    c.p = p;
    c.q = q;
    c.lambda = lambda;
    const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
    c.theta = (1.0 / p - iq) / (0.5 - iq);
    const double sp = critical_exponent(dim, p);
    const double sq = critical_exponent(dim, q);
    c.s = sp / (1 - c.theta);
    c.eps = c.s - sq;
    require(c.eps > 0 && c.eps < -sq, "split: need 0 < eps < -s_q");
    require(c.s - dim * iq > -1 + 1e-12, "split: the small part would not be subcritical");
    c.rate = -sp * p / (p - 2);
    return c;
}

double SplitConfig::threshold(int j, double critical_norm) const {
    return lambda * critical_norm * std::pow(2.0, j * rate);
}

Splitter::Splitter(const Field& u0, const DyadicPartition& P, double p) : u_(u0), P_(&P) {
    require(u0.rank() == Rank::vector, "split: input must be a vector field");
    require(u0.grid() == P.grid(), "split: partition built for another grid");
    double m = max_abs_coeff(u0);
    if (m > 0) {
        require(divergence_defect(u0) <= 1e-10, "split: input is not divergence-free");
        for (int c = 0; c < u0.ncomp(); ++c)
            require(std::abs(u0.at(c, 0)) <= 1e-12 * m, "split: input has a nonzero mean");
    }
    pu_ = leray_project(u0);
    crit_ = besov_norm(u0, BesovIndex::critical(u0.grid().dim(), p, p), P).value;
    const Grid& g = u0.grid();
    const auto& k = simd::active();
    total_.assign(u0.ncomp(), rvec(g.size(), 0.0));
    for (int j = P.j_min(); j <= P.j_max(); ++j) {
        Physical ph = to_physical(lp_block(u0, j, P));
        rvec m2(g.size(), 0.0);
        for (int c = 0; c < u0.ncomp(); ++c) {
            k.accum_square(m2.data(), ph[c].data(), g.size());
            for (std::size_t i = 0; i < g.size(); ++i) total_[c][i] += ph[c][i];
        }
        blocks_.push_back(std::move(ph));
        mag2_.push_back(std::move(m2));
    }
}

SplitResult Splitter::split(const SplitConfig& cfg) const {
    const Grid& g = u_.grid();
    require(cfg.dim == g.dim(), "split: config dimension differs from the grid's");
    const auto& k = simd::active();
    SplitResult r;
    r.lambda = cfg.lambda;
    r.critical_norm = crit_;
    Physical big(u_.ncomp(), rvec(g.size(), 0.0));
    for (int j = P_->j_min(); j <= P_->j_max(); ++j) {
        const int b = j - P_->j_min();
        double lj = cfg.threshold(j, crit_);
        r.thresholds.push_back(lj);
        for (int c = 0; c < u_.ncomp(); ++c)
            k.accum_above(big[c].data(), blocks_[b][c].data(), mag2_[b].data(), lj * lj, g.size());
    }
    Physical small = total_;
    for (int c = 0; c < u_.ncomp(); ++c)
        for (std::size_t i = 0; i < g.size(); ++i) small[c][i] -= big[c][i];
    r.U0 = leray_project(from_physical(g, Rank::vector, big));
    r.V0 = leray_project(from_physical(g, Rank::vector, small));
    // thresholding creates equal and opposite means in the two parts; both
    // are dropped so each part is mean-free and the sum is unchanged
    for (int c = 0; c < u_.ncomp(); ++c) r.U0.at(c, 0) = r.V0.at(c, 0) = 0;
    r.norm_U = l2_norm(r.U0);
    r.norm_V = besov_norm(r.V0, {cfg.s, cfg.q, cfg.q}, *P_).value;
    if (crit_ > 0) {
        r.const_U = r.norm_U / (std::pow(crit_, cfg.p / 2) * std::pow(cfg.lambda, 1 - cfg.p / 2));
        double eq = std::isinf(cfg.q) ? 0.0 : cfg.p / cfg.q;
        r.const_V = r.norm_V / (std::pow(crit_, eq) * std::pow(cfg.lambda, 1 - eq));
    }
    Field sum = r.U0 + r.V0;
    r.reassembly = max_abs_coeff(pu_) > 0 ? rel_diff(sum, pu_) : max_abs_coeff(sum);
    r.div_U = divergence_defect(r.U0);
    r.div_V = divergence_defect(r.V0);
    return r;
}

SplitResult split(const Field& u0, const SplitConfig& cfg, const DyadicPartition& P) {
    return Splitter(u0, P, cfg.p).split(cfg);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<int>& idx, double* resid) {
    require(idx.size() >= 2, "slope fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = idx.size();
    for (int i : idx) {
        double a = std::log(x[i]), b = std::log(y[i]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double icpt = (sy - slope * sx) / n;
    if (resid) {
        double r2 = 0;
        for (int i : idx) {
            double e = std::log(y[i]) - (icpt + slope * std::log(x[i]));
            r2 += e * e;
        }
        *resid = std::sqrt(r2 / n);
    }
    return slope;
}

SweepReport exponent_sweep(const Field& u0, const SplitConfig& cfg,
                           const std::vector<double>& lambdas, const DyadicPartition& P,
                           SweepWindow window) {
    require(lambdas.size() >= 4, "sweep needs at least 4 lambda values");
    for (std::size_t i = 1; i < lambdas.size(); ++i)
        require(lambdas[i] > lambdas[i - 1], "sweep lambdas must increase");
    require(lambdas.back() / lambdas.front() >= 100 * (1 - 1e-12), "sweep must span 2 decades");
    const double ratio = lambdas[1] / lambdas[0];
    for (std::size_t i = 2; i < lambdas.size(); ++i)
        require(std::abs(lambdas[i] / lambdas[i - 1] / ratio - 1) < 1e-9, "sweep lambdas must be geometric");

    SweepReport rep;
    rep.lambdas = lambdas;
    Splitter sp(u0, P, cfg.p);
    for (double l : lambdas) {
        SplitConfig c = cfg;
        c.lambda = l;
        SplitResult r = sp.split(c);
        rep.norm_U.push_back(r.norm_U);
        rep.norm_V.push_back(r.norm_V);
        rep.max_reassembly = std::max(rep.max_reassembly, r.reassembly);
    }
    if (sp.critical_norm() == 0) {
        rep.degenerate = true;
        return rep;
    }
    const double satU = l2_norm(leray_project(u0));
    const double satV = besov_norm(u0, {cfg.s, cfg.q, cfg.q}, P).value;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (rep.norm_U[i] >= window.lo * satU && rep.norm_U[i] <= window.hi * satU)
            rep.mid_U.push_back(static_cast<int>(i));
        if (rep.norm_V[i] >= window.lo * satV && rep.norm_V[i] <= window.hi * satV)
            rep.mid_V.push_back(static_cast<int>(i));
    }
    if (rep.mid_U.size() >= 2) rep.slope_U = loglog_slope(lambdas, rep.norm_U, rep.mid_U, &rep.resid_U);
    if (rep.mid_V.size() >= 2) rep.slope_V = loglog_slope(lambdas, rep.norm_V, rep.mid_V, &rep.resid_V);
    return rep;
}

SplitResult split_below(const Field& u0, SplitConfig cfg, const DyadicPartition& P, double M,
                        double lambda_start, int max_halvings) {
    require(M > 0, "target M must be positive");
    require(lambda_start > 0, "starting lambda must be positive");
    Splitter sp(u0, P, cfg.p);
    auto at = [&](double l) {
        cfg.lambda = l;
        return sp.split(cfg);
    };
    double hi = lambda_start;
    SplitResult r = at(hi);
    if (r.norm_V < M) return r;
    double lo = hi;
    int n = 0;
    for (;;) {
        require(n++ < max_halvings, "no lambda in the search range makes the small part small enough");
        lo /= 2;
        r = at(lo);
        if (r.norm_V < M) break;
        hi = lo;
    }
    SplitResult best = r;
    for (int i = 0; i < 30; ++i) {
        double mid = std::sqrt(lo * hi);
        SplitResult t = at(mid);
        if (t.norm_V < M) {
            lo = mid;
            best = std::move(t);
        } else {
            hi = mid;
        }
    }
    return best;
}

} // namespace clab
