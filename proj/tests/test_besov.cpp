#include <cmath>
#include <numbers>

#include "clab/besov.hpp"
#include "clab/error.hpp"
#include "clab/families.hpp"
#include "clab/heat.hpp"
#include "clab/spectral_ops.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace clab;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

// (h^d sum |f|^p)^(1/p) from direct-sum grid values
double direct_lp(const Field& f, double p) {
    const Grid& g = f.grid();
    std::vector<double> m2(g.size(), 0.0);
    for (int c = 0; c < f.ncomp(); ++c) {
        auto v = oracle::grid_values(f, c);
        for (std::size_t i = 0; i < v.size(); ++i) m2[i] += v[i] * v[i];
    }
    double acc = 0;
    for (double x : m2) acc += std::pow(x, p / 2);
    return std::pow(acc * g.cell_volume(), 1 / p);
}

Trajectory heat_trajectory(const Field& u0, const std::vector<double>& times) {
    Trajectory tr(u0.grid());
    for (double t : times) tr.push(t, heat_evolve(u0, t));
    return tr;
}
} // namespace

TEST_CASE("partition profiles: support and identity") {
    double leak = 0, lo = 1, hi = 0;
    for (int i = 0; i <= 20000; ++i) {
        double r = 5.0 * i / 20000;
        double v = lp_phi(r);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        if (r < 0.75 || r > 8.0 / 3) leak = std::max(leak, std::abs(v));
    }
    CHECK(leak < 1e-14);
    CHECK(lo >= 0);
    CHECK(hi <= 1);
    CHECK(lp_chi(0.75) == 1.0);
    CHECK(lp_chi(4.0 / 3) == 0.0);
    // chi(1) by hand: g(1/3) / (g(1/3) + g(1/4)), g = exp(-1/t)
    CHECK(lp_chi(1.0) == Approx(std::exp(-3.0) / (std::exp(-3.0) + std::exp(-4.0))).epsilon(1e-15));

    // telescoping sum over many blocks on a fine radial sample
    double worst = 0;
    for (int i = 1; i <= 2000; ++i) {
        double r = std::pow(2.0, -4 + 8.0 * i / 2000);
        double s = 0;
        for (int j = -8; j <= 8; ++j) s += lp_phi(std::ldexp(r, -j));
        worst = std::max(worst, std::abs(s - 1));
    }
    CHECK(worst < 1e-14);
}

TEST_CASE("partition on a 64^3 grid covers the spectrum") {
    Grid g = make_grid(3, 64, 2 * kPi);
    DyadicPartition P = build_partition(g);
    CHECK(P.identity_defect() < 1e-10);
    CHECK(P.truncated(P.j_max()));
    CHECK_FALSE(P.truncated(P.j_min()));
    CHECK_THROWS_AS(build_partition(g, 1, 3), ValidationError);
    CHECK_THROWS_AS(build_partition(g, 3, 1), ValidationError);

    Grid h = make_grid(2, 32, 4 * kPi);
    CHECK(build_partition(h).identity_defect() < 1e-10);
}

TEST_CASE("block of a single mode") {
    Grid g = make_grid(3, 16, 2 * kPi);
    DyadicPartition P = build_partition(g);
    Field u = single_mode(g, {2, 0, 0}, {cplx(0), cplx(1), cplx(0)});
    // |xi| = 2 = 2^1: phi(1) in block 1, phi(2) in block 0, phi(1/2) = 0 in block 2
    Field b1 = lp_block(u, 1, P), b0 = lp_block(u, 0, P), b2 = lp_block(u, 2, P);
    std::size_t i = g.index_of({2, 0, 0});
    CHECK(b1.at(1, i).real() == Approx(1 - lp_chi(1.0)).epsilon(1e-14));
    CHECK(b0.at(1, i).real() == Approx(lp_chi(1.0) - 0.0).epsilon(1e-14));
    CHECK(b2.at(1, i).real() == Approx(0.0));

    // Besov norm against direct-sum L^p norms of each block
    BesovIndex idx{-0.25, 4, 4};
    NormReport r = besov_norm(u, idx, P);
    double acc = 0;
    for (int j = P.j_min(); j <= P.j_max(); ++j) {
        double n = direct_lp(lp_block(u, j, P), 4);
        acc += std::pow(std::pow(2.0, j * idx.s) * n, 4);
    }
    CHECK(r.value == Approx(std::pow(acc, 0.25)).epsilon(1e-12));

    BesovIndex sup{-0.25, 4, kInf};
    NormReport rs = besov_norm(u, sup, P);
    CHECK(rs.argmax_j >= 0);
    CHECK(rs.argmax_j <= 1);
}

TEST_CASE("critical exponent and index helpers") {
    CHECK(critical_exponent(3, 4) == Approx(-0.25));
    CHECK(critical_exponent(3, 3) == Approx(0.0));
    CHECK(critical_exponent(2, 4) == Approx(-0.5));
    CHECK(critical_exponent(3, kInf) == Approx(-1.0));
    CHECK(BesovIndex::critical(3, 6, 2).is_critical(3));
    CHECK_FALSE((BesovIndex{0.1, 4, 4}).is_critical(3));
}

TEST_CASE("Kato and caloric norms of a single heat mode") {
    // |xi| = 1: t^{-s/2} ||e^{t Delta} u||_p = t^a e^{-t} ||u||_p, a = -s/2
    Grid g = make_grid(3, 16, 2 * kPi);
    Field u = single_mode(g, {1, 0, 0}, {cplx(0), cplx(0.5), cplx(0)});
    const double s = -0.5, a = -s / 2, c = lp_norm(u, 4);
    auto times = log_times(1e-6, 50, 200);
    NormReport sup = kato_norm(heat_trajectory(u, times), {s, 4, kInf});
    CHECK(sup.value == Approx(c * std::pow(a, a) * std::exp(-a)).epsilon(1e-5));

    // L^q(dt/t): c^q Gamma(a q) / q^{a q}
    const double q = 4;
    double exact = c * std::pow(std::tgamma(a * q) / std::pow(q, a * q), 1 / q);
    NormReport lq = kato_norm(heat_trajectory(u, times), {s, 4, q});
    CHECK(lq.value == Approx(exact).epsilon(1e-3));
    CHECK(caloric_norm(u, {s, 4, q}) == Approx(exact).epsilon(1e-3));
    CHECK(caloric_norm(u, {s, 4, kInf}) == Approx(sup.value).epsilon(1e-3));
    CHECK_THROWS_AS(caloric_norm(u, {0.25, 4, 4}), ValidationError);
}

TEST_CASE("time-space Besov norm of a heat flow") {
    // one mode inside one block: ||Delta_j e^{t Delta} u||_{L^2_t L^2_x}^2 = n^2 (1 - e^{-2T}) / 2
    Grid g = make_grid(3, 16, 2 * kPi);
    DyadicPartition P = build_partition(g);
    Field u = single_mode(g, {1, 0, 0}, {cplx(0), cplx(1), cplx(0)});
    const double T = 2;
    auto times = duhamel_nodes(T, 20, 64, 1);
    times.insert(times.begin(), 0.0);
    NormReport r = timespace_besov_norm(heat_trajectory(u, times), 2, {0, 2, 2}, P);
    double acc = 0;
    for (int j = P.j_min(); j <= P.j_max(); ++j) {
        double n = l2_norm(lp_block(u, j, P));
        acc += n * n * (1 - std::exp(-2 * T)) / 2;
    }
    CHECK(r.value == Approx(std::sqrt(acc)).epsilon(1e-10));

    // sup in time is the initial block norm
    NormReport rinf = timespace_besov_norm(heat_trajectory(u, times), kInf, {0, 2, 2}, P);
    double sq = 0;
    for (int j = P.j_min(); j <= P.j_max(); ++j) sq += l2_norm_sq(lp_block(u, j, P));
    CHECK(rinf.value == Approx(std::sqrt(sq)).epsilon(1e-12));

    // three samples across two decay rates are refused
    Field two = u + single_mode(g, {1, 1, 1}, {cplx(0), cplx(1), cplx(-1)});
    Trajectory coarse = heat_trajectory(two, {0.0, 3.0, 6.0});
    CHECK_THROWS_AS(timespace_besov_norm(coarse, 2, {0, 2, 2}, P), ValidationError);
}

TEST_CASE("energy norm and interpolation bounds") {
    // heat flow: sup ||U||^2 + 2 int ||grad U||^2 = ||u||^2 (2 - e^{-2 |xi|^2 T})
    Grid g = make_grid(3, 16, 2 * kPi);
    Field u = single_mode(g, {0, 2, 0}, {cplx(1), cplx(0), cplx(0)});
    const double T = 0.5;
    auto times = duhamel_nodes(T, 20, 16, 1);
    times.insert(times.begin(), 0.0);
    Trajectory tr = heat_trajectory(u, times);
    double n2 = l2_norm_sq(u);
    CHECK(energy_norm(tr) == Approx(n2 * (2 - std::exp(-8 * T))).epsilon(1e-12));

    CHECK(interpolation_check(tr, kInf, 2) == Approx(std::sqrt(n2 / (n2 * (2 - std::exp(-8 * T))))).epsilon(1e-12));
    double r = interpolation_check(tr, 2, 6);
    CHECK(std::isfinite(r));
    CHECK(r > 0);
    CHECK_THROWS_AS(interpolation_check(tr, 4, 4), ValidationError);
}

TEST_CASE("Sobolev norm and Bernstein ratio") {
    Grid g = make_grid(3, 16, 2 * kPi);
    Field u = single_mode(g, {3, 0, 0}, {cplx(0), cplx(0.3), cplx(0)});
    CHECK(hdot_norm(u, 0.5) == Approx(std::sqrt(3.0) * l2_norm(u)).epsilon(1e-13));
    CHECK(hdot_norm(u, 0) == Approx(l2_norm(u)).epsilon(1e-13));

    DyadicPartition P = build_partition(g);
    Field w = power_law_random(g, 1.0, 3);
    for (int j = 0; j <= 2; ++j) {
        double b = bernstein_ratio(w, j, 4, P);
        CHECK(b >= 0.75 * 0.9);
        CHECK(b <= 8.0 / 3 * 1.1);
    }
}

TEST_CASE("paraproduct pieces sum to the dealiased product") {
    Grid g = make_grid(3, 16, 2 * kPi);
    DyadicPartition P = build_partition(g);
    for (std::uint64_t s = 0; s < 5; ++s) {
        Field u = power_law_random(g, 1.0, 10 + s, Rank::scalar);
        Field v = power_law_random(g, 0.5, 20 + s, Rank::scalar);
        Paraproduct pp = paraproduct(u, v, P);
        Field sum = pp.t_uv + pp.t_vu + pp.r_uv;
        CHECK(rel_diff(sum, dealias_product(u, v)) < 1e-12);
    }
    Field u = power_law_random(g, 1.0, 1, Rank::scalar);
    ParaExponents bad{-0.5, 4, kInf, 1, 4, 2, 3, 2};
    CHECK_THROWS_AS(paraproduct_t_ratio(u, u, bad, P), ValidationError);
    ParaExponents pos{0.5, 4, kInf, 1, 4, 2, 2, 2};
    CHECK_THROWS_AS(paraproduct_t_ratio(u, u, pos, P), ValidationError);
    ParaExponents neg{-0.5, 4, 2, 0.25, 4, 2, 2, 1};
    CHECK_THROWS_AS(paraproduct_r_ratio(u, u, neg, P), ValidationError);
}
