#include <cmath>
#include <cstdio>

#include "clab/error.hpp"
#include "clab/fft.hpp"
#include "clab/heat.hpp"
#include "clab/simd.hpp"
#include "clab/spectral_ops.hpp"

namespace clab {

double kato_s2(const KatoExponents& e, int dim) { return 1 + e.s1 - dim / e.p1 + dim / e.p2; }

void check_kato_exponents(const KatoExponents& e, int dim) {
    require(e.p1 >= 1 && e.p2 >= e.p1, "need 1 <= p1 <= p2");
    require(e.s1 > -2, "need s1 > -2");
    require(dim / e.p1 - dim / e.p2 < 1, "need d/p1 - d/p2 < 1");
}

double grad_lp_norm(const Field& f, int l, double p) {
    require(l >= 0 && l <= 2, "gradient order must be 0, 1 or 2");
    if (l == 0) return lp_norm(f, p);
    const Grid& g = f.grid();
    const int d = g.dim();
    rvec m2(g.size(), 0.0);
    const auto& k = simd::active();
    for (int c = 0; c < f.ncomp(); ++c) {
        // all l-th derivatives of component c
        int count = l == 1 ? d : d * d;
        Physical ph(count);
        Field parts(g, Rank::scalar);
        for (int m = 0; m < count; ++m) {
            int a = l == 1 ? m : m / d, b = l == 1 ? -1 : m % d;
            for (std::size_t i = 0; i < g.size(); ++i) {
                cplx v = f.at(c, i);
                double xa = g.xi(i, a);
                parts.at(0, i) = (l == 1) ? cplx(0, xa) * v : -xa * g.xi(i, b) * v;
            }
            rvec r = to_physical(parts, 0);
            k.accum_square(m2.data(), r.data(), g.size());
        }
    }
    return lp_norm_from_mag2(g, m2, p);
}

double smoothing_ratio(const Source& F, int k, int l, const KatoExponents& e, double T,
                       int substeps) {
    const Grid& g = F.grid();
    check_kato_exponents(e, g.dim());
    require(k >= 0 && k <= 2 && l >= 0 && l <= 2, "derivative orders must lie in [0, 2]");
    const double s2 = kato_s2(e, g.dim());
    std::vector<double> nodes = duhamel_nodes(T, 20, 16, substeps);
    Trajectory G(g);
    for (double t : nodes) G.push(t, pdiv(F.eval(t)));
    Trajectory D = duhamel_march(G);

    double lhs = 0;
    // rhs[a][b] = sup_t t^{-s1/2} t^{a + b/2} ||d_t^a grad^b F||_{p1}
    std::vector<std::vector<double>> rhs(k + 1, std::vector<double>(l + 1, 0.0));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double t = nodes[i];
        Field dk = D.field(i);
        for (int a = 0; a < k; ++a) dk = laplacian(dk);
        for (int m = 0; m < k; ++m) {
            Field gm = (m == 0) ? G.field(i) : pdiv(F.derivative(t, m));
            for (int r = 0; r < k - 1 - m; ++r) gm = laplacian(gm);
            dk += gm;
        }
        double w = std::pow(t, -0.5 * s2 + k + 0.5 * l);
        lhs = std::max(lhs, w * grad_lp_norm(dk, l, e.p2));
        for (int a = 0; a <= k; ++a) {
            Field fa = F.derivative(t, a);
            for (int b = 0; b <= l; ++b) {
                double wf = std::pow(t, -0.5 * e.s1 + a + 0.5 * b);
                rhs[a][b] = std::max(rhs[a][b], wf * grad_lp_norm(fa, b, e.p1));
            }
        }
    }
    double den = 0;
    for (const auto& row : rhs)
        for (double v : row) den += v;
    return den == 0 ? 0.0 : lhs / den;
}

EstimateRow verify_smoothing_derivatives(const Source& F, int k, int l, const KatoExponents& e,
                                         double T) {
    EstimateRow row{e.s1, e.p1, e.p2, kato_s2(e, F.grid().dim()), k, l, 0, 0};
    row.constant = smoothing_ratio(F, k, l, e, T, 1);
    row.refined = smoothing_ratio(F, k, l, e, T, 2);
    return row;
}

EstimateRow verify_kato_estimate(const Source& F, const KatoExponents& e, double T) {
    return verify_smoothing_derivatives(F, 0, 0, e, T);
}

double block_decay_slope(const Field& f, int j, const DyadicPartition& P, int samples) {
    require(samples >= 3, "need at least 3 samples");
    Field b = lp_block(f, j, P);
    const double tmax = 2.0 / std::ldexp(1.0, 2 * j);
    std::vector<double> t, y;
    for (int i = 0; i < samples; ++i) {
        double ti = tmax * i / (samples - 1);
        double n = l2_norm(heat_evolve(b, ti));
        if (n <= 0) continue;
        t.push_back(ti);
        y.push_back(std::log(n));
    }
    require(t.size() >= 3, "block is empty");
    double mt = 0, my = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        mt += t[i];
        my += y[i];
    }
    mt /= t.size();
    my /= t.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        sxy += (t[i] - mt) * (y[i] - my);
        sxx += (t[i] - mt) * (t[i] - mt);
    }
    return sxy / sxx;
}

std::string estimate_csv(const std::vector<EstimateRow>& rows) {
    std::string out = "s1,p1,p2,s2,k,l,constant,refined,ratio\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d,%d,%.17g,%.17g,%.17g\n", r.s1,
                      r.p1, r.p2, r.s2, r.k, r.l, r.constant, r.refined, r.refinement_ratio());
        out += buf;
    }
    return out;
}

} // namespace clab
