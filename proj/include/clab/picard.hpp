#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "clab/error.hpp"

namespace clab {

// Fixed point x = a + L(x) + B(x, x) in a normed space X. X needs copy,
// x + y and x - y.
template <class X>
struct PicardProblem {
    X seed;
    std::function<X(const X&)> linear;               // empty means L = 0
    std::function<X(const X&, const X&)> bilinear;   // empty means B = 0
    std::function<double(const X&)> norm;
    double gamma = std::numeric_limits<double>::quiet_NaN();   // ||B(x,y)|| <= gamma ||x|| ||y||
    double l_norm = std::numeric_limits<double>::quiet_NaN();  // ||L||
};

struct PicardOptions {
    double tolerance = 1e-10;  // on ||P_{k+1} - P_k||
    int max_iterations = 60;
    int growth_limit = 3;      // consecutive increment increases
    double blowup_factor = 1e6;
};

struct FixedPointReport {
    std::vector<double> norms;       // ||P_k||, k = 0 ..
    std::vector<double> increments;  // ||P_{k+1} - P_k||
    std::vector<double> ratios;      // increments[k] / increments[k-1]
    double residual = 0;             // ||x - a - L(x) - B(x,x)||
    double gamma = std::numeric_limits<double>::quiet_NaN();
    double l_norm = std::numeric_limits<double>::quiet_NaN();
    // 1 / (2 ||(I-L)^{-1}|| gamma) - ||x||, with ||(I-L)^{-1}|| <= 1 / (1 - ||L||)
    double margin = std::numeric_limits<double>::quiet_NaN();
    // ||a|| / (1 - ||L||) against 1 / (4 ||(I-L)^{-1}|| gamma)
    double smallness_lhs = std::numeric_limits<double>::quiet_NaN();
    double smallness_rhs = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
    int iterations = 0;

    bool ratios_monotone_after(int k) const {
        for (std::size_t i = k + 1; i < ratios.size(); ++i)
            if (ratios[i] > ratios[i - 1]) return false;
        return true;
    }
};

template <class X>
X picard_map(const PicardProblem<X>& pb, const X& x) {
    X y = pb.seed;
    if (pb.linear) y = y + pb.linear(x);
    if (pb.bilinear) y = y + pb.bilinear(x, x);
    return y;
}

// Iterates P_{k+1} = a + L(P_k) + B(P_k, P_k). Throws PicardDivergence on
// runaway growth; returns with converged = false if max_iterations runs out.
template <class X>
X solve_picard(const PicardProblem<X>& pb, const PicardOptions& opt, FixedPointReport& rep) {
    require(static_cast<bool>(pb.norm), "Picard problem needs a norm");
    require(opt.tolerance > 0 && opt.max_iterations >= 1, "bad Picard options");
    if (!std::isnan(pb.l_norm)) require(pb.l_norm < 1, "linear part must have norm below 1");
    rep = FixedPointReport{};
    rep.gamma = pb.gamma;
    rep.l_norm = pb.l_norm;

    const double seed_norm = pb.norm(pb.seed);
    X x = pb.seed;
    rep.norms.push_back(seed_norm);
    int growth = 0;
    for (int k = 0; k < opt.max_iterations; ++k) {
        X next = picard_map(pb, x);
        double inc = pb.norm(next - x);
        double nn = pb.norm(next);
        rep.increments.push_back(inc);
        rep.norms.push_back(nn);
        if (rep.increments.size() >= 2) {
            double prev = rep.increments[rep.increments.size() - 2];
            rep.ratios.push_back(prev > 0 ? inc / prev : 0.0);
            growth = inc > prev ? growth + 1 : 0;
        }
        x = std::move(next);
        rep.iterations = k + 1;
        if (!std::isfinite(nn) || growth >= opt.growth_limit ||
            (seed_norm > 0 && nn > opt.blowup_factor * seed_norm))
            throw PicardDivergence("Picard iteration diverged after " + std::to_string(k + 1) +
                                       " iterations (outside the perturbative regime)",
                                   rep.increments);
        if (inc < opt.tolerance) {
            rep.converged = true;
            break;
        }
    }
    rep.residual = pb.norm(x - picard_map(pb, x));
    if (!std::isnan(pb.gamma) && pb.gamma > 0) {
        double l = std::isnan(pb.l_norm) ? 0.0 : pb.l_norm;
        double inv = 1.0 / (1.0 - l);
        rep.margin = 1.0 / (2 * inv * pb.gamma) - rep.norms.back();
        rep.smallness_lhs = inv * seed_norm;
        rep.smallness_rhs = 1.0 / (4 * inv * pb.gamma);
    }
    return x;
}

// max over probes of ||B(x, y)|| / (||x|| ||y||)
template <class X>
double estimate_gamma(const PicardProblem<X>& pb, const std::function<X(int)>& probe, int n = 20) {
    double g = 0;
    for (int i = 0; i < n; ++i) {
        X x = probe(2 * i), y = probe(2 * i + 1);
        double nx = pb.norm(x), ny = pb.norm(y);
        if (nx == 0 || ny == 0) continue;
        g = std::max(g, pb.norm(pb.bilinear(x, y)) / (nx * ny));
    }
    return g;
}

// max over probes of a few power steps ||L^m x|| ratios
template <class X>
double estimate_linear_norm(const PicardProblem<X>& pb, const std::function<X(int)>& probe,
                            int n = 20, int power_steps = 3) {
    if (!pb.linear) return 0;
    double best = 0;
    for (int i = 0; i < n; ++i) {
        X x = probe(i);
        double nx = pb.norm(x);
        if (nx == 0) continue;
        for (int s = 0; s < power_steps; ++s) {
            X y = pb.linear(x);
            double ny = pb.norm(y);
            best = std::max(best, ny / nx);
            if (ny == 0) break;
            x = std::move(y);
            nx = ny;
        }
    }
    return best;
}

} // namespace clab

namespace clab {

struct PropagationReport {
    double x_e = 0;      // ||x||_E
    double a_e = 0;      // ||a||_E
    double inv_e = 1;    // bound on ||(I-L)^{-1}||_E
    double bound = 0;    // 2 inv_e ||a||_E
    bool holds = true;   // x_e <= bound
    double eta = 0;      // measured cross constant
    bool cross_ok = true;  // inv_e eta <= inv_x gamma
};

// Checks ||x||_E <= 2 ||(I-L)^{-1}||_E ||a||_E on a computed fixed point and
// measures the cross constant max(||B(y,z)||_E, ||B(z,y)||_E) / (||y||_E ||z||_X)
// over the pairs drawn from {a, x}.
template <class X>
PropagationReport propagation_check(const PicardProblem<X>& pb, const X& x,
                                    const std::function<double(const X&)>& norm_e,
                                    double l_norm_e = 0) {
    PropagationReport r;
    r.x_e = norm_e(x);
    r.a_e = norm_e(pb.seed);
    r.inv_e = 1.0 / (1.0 - l_norm_e);
    r.bound = 2 * r.inv_e * r.a_e;
    r.holds = r.x_e <= r.bound * (1 + 1e-12);
    if (pb.bilinear) {
        const X* pts[2] = {&pb.seed, &x};
        for (const X* y : pts)
            for (const X* z : pts) {
                double den = norm_e(*y) * pb.norm(*z);
                if (den == 0) continue;
                double v = std::max(norm_e(pb.bilinear(*y, *z)), norm_e(pb.bilinear(*z, *y)));
                r.eta = std::max(r.eta, v / den);
            }
        if (!std::isnan(pb.gamma)) {
            double lx = std::isnan(pb.l_norm) ? 0.0 : pb.l_norm;
            r.cross_ok = r.inv_e * r.eta <= pb.gamma / (1.0 - lx);
        }
    }
    return r;
}

} // namespace clab
