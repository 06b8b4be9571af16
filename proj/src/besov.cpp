#include <cmath>

#include "clab/besov.hpp"
#include "clab/error.hpp"
#include "clab/simd.hpp"
#include "clab/spectral_ops.hpp"

namespace clab {

void aggregate(NormReport& r) {
    const double q = r.index.q;
    require(q >= 1, "l^q exponent must be at least 1");
    r.truncated = false;
    double best = -1, acc = 0;
    r.argmax_j = r.blocks.empty() ? 0 : r.blocks.front().j;
    for (const auto& b : r.blocks) {
        if (b.truncated && b.contrib > 0) r.truncated = true;
        if (b.contrib > best) {
            best = b.contrib;
            r.argmax_j = b.j;
        }
        if (!std::isinf(q)) acc += std::pow(b.contrib, q);
    }
    if (r.blocks.empty()) r.value = 0;
    else if (std::isinf(q)) r.value = best;
    else r.value = std::pow(acc, 1.0 / q);
}

std::vector<double> block_lp_norms(const Field& f, const DyadicPartition& P, double p) {
    std::vector<double> out;
    out.reserve(P.count());
    for (int j = P.j_min(); j <= P.j_max(); ++j)
        out.push_back(lp_norm(lp_block(f, j, P), p));
    return out;
}

NormReport besov_norm(const Field& f, const BesovIndex& idx, const DyadicPartition& P) {
    NormReport r;
    r.index = idx;
    std::vector<double> n = block_lp_norms(f, P, idx.p);
    for (int j = P.j_min(); j <= P.j_max(); ++j)
        r.blocks.push_back({j, std::pow(2.0, j * idx.s) * n[j - P.j_min()], P.truncated(j)});
    aggregate(r);
    return r;
}

double hdot_norm(const Field& f, double s) {
    const Grid& g = f.grid();
    std::vector<double> w = radial_table(g, [s](double xi) { return xi > 0 ? std::pow(xi, 2 * s) : 0.0; });
    double acc = 0;
    for (int c = 0; c < f.ncomp(); ++c) {
        const cplx* p = f.comp(c);
        for (std::size_t i = 0; i < g.size(); ++i) acc += w[g.k2(i)] * std::norm(p[i]);
    }
    return std::sqrt(acc * g.volume());
}

double bernstein_ratio(const Field& f, int j, double p, const DyadicPartition& P) {
    const Grid& g = f.grid();
    Field b = lp_block(f, j, P);
    double base = lp_norm(b, p);
    if (base == 0) return 0;
    rvec m2(g.size(), 0.0);
    const auto& k = simd::active();
    const cplx I(0, 1);
    for (int c = 0; c < b.ncomp(); ++c) {
        Field s(g, Rank::vector);
        for (std::size_t i = 0; i < g.size(); ++i)
            for (int a = 0; a < g.dim(); ++a) s.at(a, i) = I * g.xi(i, a) * b.at(c, i);
        for (const auto& comp : to_physical(s)) k.accum_square(m2.data(), comp.data(), g.size());
    }
    return lp_norm_from_mag2(g, m2, p) / (std::ldexp(1.0, j) * base);
}

} // namespace clab
