#include <cmath>
#include <numbers>

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

Field scaled_mode(const Field& f, const RadialSymbol& m) { return apply_radial(f, m); }

// two modes with |k| = 1: every product mode decays like e^{-2t}
Field unit_shell(const Grid& g) {
    return single_mode(g, {1, 0, 0}, {cplx(0), cplx(0.4, 0.1), cplx(0.2)}) +
           single_mode(g, {0, 1, 0}, {cplx(0.3, -0.2), cplx(0), cplx(-0.1, 0.3)});
}

// int_0^t e^{-x^2 (t - s)} s^a ds by Simpson in s = t v^2
double power_duhamel(double x, double t, double a) {
    const int n = 4000;
    auto f = [&](double v) {
        double s = t * v * v;
        return std::exp(-x * x * (t - s)) * std::pow(v, 2 * a + 1) * 2 * t * std::pow(t, a);
    };
    double acc = f(0) + f(1);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4 : 2) * f(double(i) / n);
    return acc / (3.0 * n);
}
} // namespace

TEST_CASE("heat semigroup on single modes") {
    Grid g = make_grid(3, 16, 2 * kPi);
    Field u = single_mode(g, {2, 1, 0}, {cplx(0.1), cplx(-0.2), cplx(0.7)});
    Field h = heat_evolve(u, 0.3);
    std::size_t i = g.index_of({2, 1, 0});
    for (int c = 0; c < 3; ++c) CHECK(std::abs(h.at(c, i) - u.at(c, i) * std::exp(-5 * 0.3)) < 1e-15);
    CHECK(rel_diff(heat_evolve(heat_evolve(u, 0.1), 0.2), h) < 1e-14);
    CHECK(rel_diff(heat_evolve(u, 0), u) == 0);

    Field r = power_law_random(g, 1.0, 4);
    CHECK(rel_diff(heat_evolve(heat_evolve(r, 0.05), 0.07), heat_evolve(r, 0.12)) < 1e-13);

    Grid big = make_grid(2, 32, 4 * kPi);
    Field v = single_mode(big, {2, 0, 0}, {cplx(0), cplx(1), cplx(0)});
    // xi = 2 pi k / L = 1
    CHECK(heat_evolve(v, 1.0).at(1, big.index_of({2, 0, 0})).real() == Approx(std::exp(-1.0)));
}

TEST_CASE("Oseen operator and divergence") {
    Grid g = make_grid(3, 16, 2 * kPi);
    Field w = unit_shell(g);
    Field F = dealias_product(w, w);
    Field G = pdiv(F);
    CHECK(divergence_defect(G) < 1e-14);
    Field O = oseen_apply(F, 0.25);
    Field exact = scaled_mode(G, [](double x) { return std::exp(-x * x * 0.25); });
    CHECK(rel_diff(O, exact) < 1e-14);

    // row-wise divergence against the transpose convention
    Field r = power_law_random(g, 1.0, 8);
    Field s = power_law_random(g, 1.0, 9);
    Field lhs = divergence(dealias_product(r, s));
    // div(r (x) s) = (s . grad) r when div s = 0
    Field adv(g, Rank::vector);
    Physical sp = to_physical(s);
    for (int i = 0; i < 3; ++i) {
        Physical gr = to_physical(gradient(component(r, i)));
        rvec acc(g.size(), 0.0);
        for (int j = 0; j < 3; ++j)
            for (std::size_t m = 0; m < g.size(); ++m) acc[m] += sp[j][m] * gr[j][m];
        Field ci = dealias(from_physical(g, Rank::scalar, Physical{acc}));
        std::copy(ci.comp(0), ci.comp(0) + g.size(), adv.comp(i));
    }
    CHECK(rel_diff(lhs, adv) < 1e-12);
}

TEST_CASE("Duhamel integral of a constant source") {
    Grid g = make_grid(3, 16, 2 * kPi);
    Field w = power_law_random(g, 1.0, 2);
    Field F = dealias_product(w, w);
    const double t = 0.7;
    Trajectory src(g);
    src.push(0, F);
    src.push(t, F);
    DuhamelResult d = duhamel_integral(src, t, {});
    Field exact = scaled_mode(pdiv(F), [t](double x) {
        return x == 0 ? t : -std::expm1(-x * x * t) / (x * x);
    });
    CHECK(rel_diff(d.value, exact) < 1e-13);
    CHECK(d.error_estimate < 1e-13 * l2_norm(exact));
    CHECK(divergence_defect(d.value) < 1e-14);
}

TEST_CASE("Duhamel integral of a heat product is exact up to quadrature") {
    Grid g = make_grid(3, 16, 2 * kPi);
    HeatProductSource src(unit_shell(g));
    const double t = 0.6;
    Field G0 = pdiv(src.eval(0));
    Field exact = scaled_mode(G0, [t](double x) {
        double x2 = x * x;
        return std::abs(x2 - 2) < 1e-12 ? t * std::exp(-2 * t)
                                         : (std::exp(-2 * t) - std::exp(-x2 * t)) / (x2 - 2);
    });
    double prev = 0;
    for (int sub : {1, 2, 4}) {
        DuhamelResult d = duhamel_integral(src, t, {sub, true});
        double err = l2_norm(d.value - exact);
        CHECK(err < 2e-3 * l2_norm(exact) / (sub * sub));
        // error estimate tracks the true error
        CHECK(d.error_estimate > 0.3 * err);
        CHECK(d.error_estimate < 3 * err);
        if (prev > 0) CHECK(prev / err == Approx(4).epsilon(0.1));
        prev = err;
    }
    // exact time derivative: d_t F = -2 F here
    Field dF = src.derivative(0.2, 1);
    CHECK(rel_diff(dF, -2.0 * src.eval(0.2)) < 1e-13);
    CHECK(rel_diff(src.derivative(0.2, 2), 4.0 * src.eval(0.2)) < 1e-13);
}

TEST_CASE("Duhamel integral of a power-law source") {
    Grid g = make_grid(3, 16, 2 * kPi);
    Field w = unit_shell(g);
    const double a = 0.5, t = 0.5;
    PowerLawSource src(dealias_product(w, w), a);
    Field G0 = pdiv(src.eval(1));
    Field exact = scaled_mode(G0, [&](double x) { return power_duhamel(x, t, a); });
    DuhamelResult d = duhamel_integral(src, t, {4, true});
    CHECK(l2_norm(d.value - exact) < 1e-4 * l2_norm(exact));

    // linearity in the source
    PowerLawSource twice(2.0 * dealias_product(w, w), a);
    CHECK(rel_diff(duhamel_integral(twice, t, {1, false}).value,
                   2.0 * duhamel_integral(src, t, {1, false}).value) < 1e-14);
    CHECK(rel_diff(src.derivative(0.3, 1), a / 0.3 * src.eval(0.3)) < 1e-13);
}

TEST_CASE("Duhamel march against the closed form on a trajectory") {
    Grid g = make_grid(2, 16, 2 * kPi);
    Field G = single_mode(g, {1, 1, 0}, {cplx(1), cplx(-1), cplx(0)});
    Trajectory tr(g);
    // G(s) = s G: piecewise linear is exact
    for (int i = 0; i <= 10; ++i) tr.push(0.1 * i, (0.1 * i) * G);
    Trajectory D = duhamel_march(tr);
    const double x2 = 2;
    for (std::size_t i = 1; i < D.size(); ++i) {
        double t = D.time(i);
        double c = (x2 * t - 1 + std::exp(-x2 * t)) / (x2 * x2);
        CHECK(rel_diff(D.field(i), c * G) < 1e-13);
    }
    CHECK_THROWS_AS(duhamel_integral(tr, 2.0, {}), ValidationError);
}

TEST_CASE("Kato exponent validation") {
    CHECK_NOTHROW(check_kato_exponents({-1, 2, 4}, 3));
    CHECK_THROWS_AS(check_kato_exponents({-2, 2, 4}, 3), ValidationError);
    CHECK_THROWS_AS(check_kato_exponents({-1, 1.5, 3}, 3), ValidationError);
    CHECK_THROWS_AS(check_kato_exponents({-1, 4, 2}, 3), ValidationError);
    CHECK_THROWS_AS(check_kato_exponents({-1, 2, 6}, 3), ValidationError);
    CHECK(kato_s2({-1, 2, 4}, 3) == Approx(1 - 1 - 1.5 + 0.75));
}

TEST_CASE("smoothing ratios are stable under refinement") {
    Grid g = make_grid(3, 16, 2 * kPi);
    HeatProductSource src(power_law_random(g, 1.0, 11, Rank::vector, 4));
    KatoExponents e{-1, 2, 4};
    EstimateRow base = verify_kato_estimate(src, e, 1.0);
    CHECK(base.constant > 0);
    CHECK(std::isfinite(base.constant));
    CHECK(base.refinement_ratio() == Approx(1).epsilon(0.1));
    for (int k = 0; k <= 2; ++k)
        for (int l = 0; l <= 2; ++l) {
            CAPTURE(k);
            CAPTURE(l);
            EstimateRow r = verify_smoothing_derivatives(src, k, l, e, 1.0);
            CHECK(std::isfinite(r.constant));
            CHECK(r.constant > 0);
            CHECK(r.refinement_ratio() == Approx(1).epsilon(0.1));
        }
    CHECK(estimate_csv({base}).find("s1,p1,p2,s2,k,l,constant,refined,ratio") == 0);
}

TEST_CASE("block decay and Bernstein gain") {
    Grid g = make_grid(3, 32, 2 * kPi);
    DyadicPartition P = build_partition(g);
    // |xi| = 3 lies in block 1 only
    Field u = single_mode(g, {3, 0, 0}, {cplx(0), cplx(1), cplx(0)});
    CHECK_THROWS_AS(block_decay_slope(u, 2, P), ValidationError);
    CHECK(block_decay_slope(u, 1, P) == Approx(-9).epsilon(1e-10));
    Field r = power_law_random(g, 1.0, 5);
    for (int j = 1; j <= 3; ++j) {
        CHECK(block_decay_slope(r, j, P) <= -std::pow(0.75 * std::ldexp(1.0, j), 2) * 0.99);
        CHECK(block_decay_slope(r, j, P) >= -std::pow(8.0 / 3 * std::ldexp(1.0, j), 2) * 1.01);
        Field b = lp_block(r, j, P);
        for (int l = 1; l <= 2; ++l) {
            double ratio = grad_lp_norm(b, l, 2) / (std::ldexp(1.0, j * l) * lp_norm(b, 2));
            CHECK(ratio >= std::pow(0.75, l) * 0.999);
            CHECK(ratio <= std::pow(8.0 / 3, l) * 1.001);
        }
    }
}
