#include <cmath>
#include <numbers>

#include "clab/calderon.hpp"
#include "clab/error.hpp"
#include "clab/families.hpp"
#include "clab/spectral_ops.hpp"
#include "doctest.h"

using namespace clab;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

// Big part before projection: blockwise keep the points where |Delta_j u| > lambda_j.
Physical big_part(const Field& u, const DyadicPartition& P, const std::vector<double>& thr) {
    const Grid& g = u.grid();
    Physical out(u.ncomp(), rvec(g.size(), 0.0));
    for (int j = P.j_min(); j <= P.j_max(); ++j) {
        Physical b = to_physical(lp_block(u, j, P));
        double l = thr[j - P.j_min()];
        for (std::size_t i = 0; i < g.size(); ++i) {
            double m = 0;
            for (int c = 0; c < u.ncomp(); ++c) m += b[c][i] * b[c][i];
            if (std::sqrt(m) > l)
                for (int c = 0; c < u.ncomp(); ++c) out[c][i] += b[c][i];
        }
    }
    return out;
}

std::vector<double> geometric(double lo, double ratio, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(ratio, i));
    return v;
}
} // namespace

TEST_CASE("split exponents") {
    SplitConfig c = SplitConfig::make(3, 4, 8, 1);
    CHECK(c.theta == Approx(1.0 / 3));
    CHECK(c.s == Approx(-0.375));
    CHECK(c.eps == Approx(0.25));
    CHECK(c.rate == Approx(0.5));
    CHECK(c.threshold(2, 3.0) == Approx(6.0));
    // interpolation identity
    CHECK(1.0 / c.p == Approx(c.theta / 2 + (1 - c.theta) / c.q));

    SplitConfig inf = SplitConfig::make(3, 4, kInf, 1);
    CHECK(inf.theta == Approx(0.5));
    CHECK(inf.s == Approx(-0.5));
    CHECK(inf.eps == Approx(0.5));

    CHECK_THROWS_AS(SplitConfig::make(3, 3, 8, 1), ValidationError);
    CHECK_THROWS_AS(SplitConfig::make(3, 4, 4, 1), ValidationError);
    CHECK_THROWS_AS(SplitConfig::make(3, 4, 8, 0), ValidationError);
    CHECK_THROWS_AS(SplitConfig::make(4, 5, 8, 1), ValidationError);
    // in two dimensions s - 2/q = -1 for every p < q
    CHECK_THROWS_AS(SplitConfig::make(2, 4, 8, 1), ValidationError);
    CHECK_THROWS_AS(SplitConfig::make(2, 3, kInf, 1), ValidationError);
}

TEST_CASE("split matches a direct blockwise threshold") {
    Grid g = make_grid(3, 16, 2 * kPi);
    DyadicPartition P = build_partition(g);
    Field u = critical_singular(g, 3, 7, 6);
    for (double lambda : {0.05, 0.3, 2.0}) {
        CAPTURE(lambda);
        SplitResult r = split(u, SplitConfig::make(3, 4, 8, lambda), P);
        Field big = leray_project(from_physical(g, Rank::vector, big_part(u, P, r.thresholds)));
        for (int c = 0; c < 3; ++c) big.at(c, 0) = 0;
        CHECK(l2_norm(r.U0 - big) <= 1e-12 * std::max(1.0, l2_norm(big)));
        CHECK(r.reassembly < 1e-12);
        CHECK(r.div_U < 1e-12);
        CHECK(r.div_V < 1e-12);
        CHECK(r.norm_U == Approx(l2_norm(r.U0)));
        CHECK(r.norm_V == Approx(besov_norm(r.V0, {-0.375, 8, 8}, P).value));
    }
}

TEST_CASE("split extremes and refusals") {
    Grid g = make_grid(3, 16, 2 * kPi);
    DyadicPartition P = build_partition(g);
    Field u = power_law_random(g, 1.0, 3);
    SplitResult all_small = split(u, SplitConfig::make(3, 4, 8, 1e6), P);
    CHECK(l2_norm(all_small.U0) == 0);
    CHECK(rel_diff(all_small.V0, u) < 1e-12);
    SplitResult all_big = split(u, SplitConfig::make(3, 4, 8, 1e-30), P);
    CHECK(rel_diff(all_big.U0, u) < 1e-12);
    CHECK(l2_norm(all_big.V0) < 1e-12);

    Field zero(g, Rank::vector);
    SplitResult z = split(zero, SplitConfig::make(3, 4, 8, 1), P);
    CHECK(z.norm_U == 0);
    CHECK(z.norm_V == 0);

    Field grad = gradient(power_law_random(g, 1.0, 3, Rank::scalar));
    CHECK_THROWS_AS(split(grad, SplitConfig::make(3, 4, 8, 1), P), ValidationError);
    Field shifted = u;
    shifted.at(0, 0) = 0.5;
    CHECK_THROWS_AS(split(shifted, SplitConfig::make(3, 4, 8, 1), P), ValidationError);
    CHECK_THROWS_AS(split(u, SplitConfig::make(2, 4, 8, 1), P), ValidationError);
}

TEST_CASE("unprojected big part is monotone in lambda block by block") {
    Grid g = make_grid(3, 16, 2 * kPi);
    DyadicPartition P = build_partition(g);
    Field u = critical_singular(g, 2, 4, 6);
    Splitter sp(u, P, 4);
    std::vector<double> prev;
    for (double lambda : geometric(0.01, 2, 12)) {
        SplitConfig c = SplitConfig::make(3, 4, 8, lambda);
        SplitResult r = sp.split(c);
        std::vector<double> cur;
        for (int j = P.j_min(); j <= P.j_max(); ++j) {
            std::vector<double> thr(P.count(), 1e300);
            thr[j - P.j_min()] = r.thresholds[j - P.j_min()];
            cur.push_back(l2_norm(from_physical(g, Rank::vector, big_part(u, P, thr))));
        }
        if (!prev.empty())
            for (std::size_t b = 0; b < cur.size(); ++b) CHECK(cur[b] <= prev[b] * (1 + 1e-12));
        prev = cur;
    }
}

TEST_CASE("exponent sweep bookkeeping") {
    Grid g = make_grid(3, 16, 2 * kPi);
    DyadicPartition P = build_partition(g);
    Field u = critical_singular(g, 3, 7, 6);
    SplitConfig c = SplitConfig::make(3, 4, 8, 1);
    SweepReport r = exponent_sweep(u, c, geometric(1e-3, 2, 16), P);
    CHECK(r.norm_U.size() == 16);
    CHECK(r.max_reassembly < 1e-12);
    CHECK(r.norm_U.front() > r.norm_U.back());
    CHECK(r.norm_V.front() < r.norm_V.back());
    CHECK_FALSE(r.degenerate);

    Field zero(g, Rank::vector);
    CHECK(exponent_sweep(zero, c, geometric(1e-3, 2, 16), P).degenerate);

    CHECK_THROWS_AS(exponent_sweep(u, c, {1, 10, 100}, P), ValidationError);
    CHECK_THROWS_AS(exponent_sweep(u, c, geometric(1, 2, 5), P), ValidationError);
    CHECK_THROWS_AS(exponent_sweep(u, c, {1, 3, 10, 30, 100, 400}, P), ValidationError);
    CHECK_THROWS_AS(exponent_sweep(u, c, {100, 30, 10, 3, 1}, P), ValidationError);
}

TEST_CASE("log-log slope") {
    std::vector<double> x{1, 2, 4, 8}, y;
    for (double v : x) y.push_back(3 * std::pow(v, -1.5));
    double res = 1;
    CHECK(loglog_slope(x, y, {0, 1, 2, 3}, &res) == Approx(-1.5));
    CHECK(res < 1e-12);
    CHECK_THROWS_AS(loglog_slope(x, y, {0}), ValidationError);
}

TEST_CASE("split below a target") {
    Grid g = make_grid(3, 16, 2 * kPi);
    DyadicPartition P = build_partition(g);
    Field u = critical_singular(g, 3, 7, 6);
    SplitConfig c = SplitConfig::make(3, 4, 8, 1);
    double full = besov_norm(u, {c.s, 8, 8}, P).value;
    SplitResult r = split_below(u, c, P, 0.1 * full);
    CHECK(r.norm_V < 0.1 * full);
    c.lambda = r.lambda * 1.01;
    CHECK(split(u, c, P).norm_V >= 0.1 * full * 0.9);
    CHECK_THROWS_AS(split_below(u, c, P, -1), ValidationError);
    CHECK_THROWS_AS(split_below(u, c, P, 1e-300, 1, 5), ValidationError);
}
