#include <cmath>

#include "clab/besov.hpp"
#include "clab/error.hpp"
#include "clab/simd.hpp"
#include "clab/spectral_ops.hpp"

namespace clab {

namespace {

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

void check_exponents(const ParaExponents& e) {
    require(std::abs(inv(e.p) - inv(e.p1) - inv(e.p2)) <= 1e-12, "need 1/p = 1/p1 + 1/p2");
    require(std::abs(inv(e.q) - inv(e.q1) - inv(e.q2)) <= 1e-12, "need 1/q = 1/q1 + 1/q2");
    require(e.p >= 1 && e.q >= 1, "exponents must be at least 1");
}

double ratio(const Field& piece, const Field& u, const Field& v, const ParaExponents& e,
             const DyadicPartition& P) {
    double nu = besov_norm(u, {e.s1, e.p1, e.q1}, P).value;
    double nv = besov_norm(v, {e.s2, e.p2, e.q2}, P).value;
    if (nu == 0 || nv == 0) return 0;
    return besov_norm(piece, {e.s1 + e.s2, e.p, e.q}, P).value / (nu * nv);
}

} // namespace

Paraproduct paraproduct(const Field& u, const Field& v, const DyadicPartition& P) {
    require(u.rank() == Rank::scalar && v.rank() == Rank::scalar, "paraproduct takes scalar fields");
    require(u.grid() == P.grid() && v.grid() == P.grid(), "paraproduct: grid mismatch");
    const Grid& g = u.grid();
    const int nb = P.count();
    std::vector<rvec> du(nb), dv(nb), su(nb), sv(nb);
    for (int b = 0; b < nb; ++b) {
        int j = P.j_min() + b;
        du[b] = to_physical(lp_block(u, j, P), 0);
        dv[b] = to_physical(lp_block(v, j, P), 0);
        su[b] = to_physical(low_freq(u, j - 1, P), 0);
        sv[b] = to_physical(low_freq(v, j - 1, P), 0);
    }
    const auto& k = simd::active();
    const std::size_t n = g.size();
    Physical t_uv(1, rvec(n, 0.0)), t_vu(1, rvec(n, 0.0)), r(1, rvec(n, 0.0));
    for (int b = 0; b < nb; ++b) {
        k.accum_product(t_uv[0].data(), su[b].data(), dv[b].data(), n);
        k.accum_product(t_vu[0].data(), sv[b].data(), du[b].data(), n);
        for (int c = std::max(0, b - 1); c <= std::min(nb - 1, b + 1); ++c)
            k.accum_product(r[0].data(), du[b].data(), dv[c].data(), n);
    }
    Paraproduct out{from_physical(g, Rank::scalar, t_uv), from_physical(g, Rank::scalar, t_vu),
                    from_physical(g, Rank::scalar, r)};
    dealias_inplace(out.t_uv);
    dealias_inplace(out.t_vu);
    dealias_inplace(out.r_uv);
    return out;
}

double paraproduct_t_ratio(const Field& u, const Field& v, const ParaExponents& e,
                           const DyadicPartition& P) {
    check_exponents(e);
    require(e.s1 < 0, "low-high estimate needs s1 < 0");
    return ratio(paraproduct(u, v, P).t_uv, u, v, e, P);
}

double paraproduct_r_ratio(const Field& u, const Field& v, const ParaExponents& e,
                           const DyadicPartition& P) {
    check_exponents(e);
    require(e.s1 + e.s2 > 0, "resonant estimate needs s1 + s2 > 0");
    return ratio(paraproduct(u, v, P).r_uv, u, v, e, P);
}

} // namespace clab
