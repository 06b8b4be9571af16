#include "clab/families.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "clab/besov.hpp"
#include "clab/error.hpp"
#include "clab/fft.hpp"
#include "clab/spectral_ops.hpp"

namespace clab {

Field single_mode(const Grid& g, const std::array<int, 3>& k, const std::array<cplx, 3>& a, Rank r) {
    Field f(g, r);
    std::size_t i = g.index_of(k);
    std::array<int, 3> mk{-k[0], -k[1], -k[2]};
    std::size_t j = g.index_of(mk);
    require(!g.nyquist(i), "single_mode: Nyquist wavevector");
    for (int c = 0; c < f.ncomp() && c < 3; ++c) {
        if (i == j) {
            f.at(c, i) = a[c].real();
        } else {
            f.at(c, i) = a[c];
            f.at(c, j) = std::conj(a[c]);
        }
    }
    return f;
}

Field taylor_green_2d(const Grid& g, double amp) {
    require(g.dim() == 2, "Taylor-Green family is two-dimensional");
    const int n = g.n();
    Physical ph(2, rvec(g.size()));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double x = 2 * std::numbers::pi * i / n, y = 2 * std::numbers::pi * j / n;
            ph[0][i * n + j] = amp * std::sin(x) * std::cos(y);
            ph[1][i * n + j] = -amp * std::cos(x) * std::sin(y);
        }
    return from_physical(g, Rank::vector, ph);
}

Field abc_3d(const Grid& g, double A, double B, double C, int m) {
    require(g.dim() == 3, "ABC family is three-dimensional");
    const int n = g.n();
    require(m >= 1 && 3 * m <= n, "ABC wavenumber outside the 2/3 band");
    Physical ph(3, rvec(g.size()));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                double x = 2 * std::numbers::pi * m * i / n, y = 2 * std::numbers::pi * m * j / n,
                       z = 2 * std::numbers::pi * m * l / n;
                std::size_t f = (static_cast<std::size_t>(i) * n + j) * n + l;
                ph[0][f] = A * std::sin(z) + C * std::cos(y);
                ph[1][f] = B * std::sin(x) + A * std::cos(z);
                ph[2][f] = C * std::sin(y) + B * std::cos(x);
            }
    return from_physical(g, Rank::vector, ph);
}

namespace {

void normalize_l2(Field& f) {
    double n = l2_norm(f);
    if (n > 0) f *= 1.0 / n;
}

} // namespace

Field power_law_random(const Grid& g, double alpha, std::uint64_t seed, Rank r, double k_max) {
    if (k_max <= 0) k_max = g.n() / 3.0;
    Field f(g, r);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    const auto& al = g.tables().aliased;
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::size_t j = g.neg(i);
        if (j < i || g.k2(i) == 0 || g.nyquist(i) || al[i]) continue;
        double kk = std::sqrt(static_cast<double>(g.k2(i)));
        if (kk > k_max) continue;
        double amp = std::pow(kk, -alpha);
        for (int c = 0; c < f.ncomp(); ++c) {
            cplx z(nd(rng), nd(rng));
            if (i == j) z = z.real();
            f.at(c, i) = amp * z;
            f.at(c, j) = amp * std::conj(z);
        }
    }
    if (r == Rank::vector) leray_project_inplace(f);
    normalize_l2(f);
    return f;
}

Field critical_singular(const Grid& g, int centres, std::uint64_t seed, double k_c) {
    require(centres >= 1, "need at least one centre");
    Field f(g, Rank::vector);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    std::normal_distribution<double> nd(0.0, 1.0);
    const int d = g.dim();
    std::vector<std::array<double, 3>> x0(centres), a(centres);
    for (int c = 0; c < centres; ++c)
        for (int k = 0; k < 3; ++k) {
            x0[c][k] = ud(rng);
            a[c][k] = nd(rng);
        }
    const auto& al = g.tables().aliased;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.k2(i) == 0 || g.nyquist(i) || al[i]) continue;
        double kk = std::sqrt(static_cast<double>(g.k2(i)));
        double env = lp_chi(kk / k_c) / (kk * kk);
        if (env == 0) continue;
        for (int c = 0; c < centres; ++c) {
            double ph = 0;
            for (int k = 0; k < d; ++k) ph -= 2 * std::numbers::pi * g.k(i, k) * x0[c][k];
            cplx e = env * std::polar(1.0, ph);
            for (int k = 0; k < d; ++k) f.at(k, i) += a[c][k] * e;
        }
    }
    leray_project_inplace(f);
    normalize_l2(f);
    return f;
}

Field make_family(const Grid& g, const std::string& name, double amplitude, std::uint64_t seed,
                  double alpha) {
    Field f;
    if (name == "taylor-green") f = taylor_green_2d(g, 1.0);
    else if (name == "abc") f = abc_3d(g, 1.0, 1.0, 1.0);
    else if (name == "power-law") f = power_law_random(g, alpha, seed);
    else if (name == "critical-singular") f = critical_singular(g, 4, seed, g.n() / 3.0);
    else if (name == "zero") f = Field(g, Rank::vector);
    else throw ValidationError("unknown initial-data family: " + name);
    f *= amplitude;
    return f;
}

} // namespace clab
