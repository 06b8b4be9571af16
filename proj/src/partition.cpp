#include <cmath>

#include "clab/besov.hpp"
#include "clab/error.hpp"
#include "clab/spectral_ops.hpp"

namespace clab {

namespace {

double g_exp(double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; }

} // namespace

double critical_exponent(int dim, double p) { return -1.0 + dim / p; }

BesovIndex BesovIndex::critical(int dim, double p, double q) {
    BesovIndex b;
    b.s = critical_exponent(dim, p);
    b.p = p;
    b.q = q;
    return b;
}

bool BesovIndex::is_critical(int dim) const { return std::abs(s + 1 - dim / p) <= 1e-14; }

double lp_chi(double r) {
    if (r <= 0.75) return 1.0;
    if (r >= 4.0 / 3.0) return 0.0;
    double a = g_exp(4.0 / 3.0 - r), b = g_exp(r - 0.75);
    return a / (a + b);
}

double lp_phi(double r) { return lp_chi(0.5 * r) - lp_chi(r); }

const std::vector<double>& DyadicPartition::phi_table(int j) const {
    require(j >= j_min_ && j <= j_max_, "block index outside partition range");
    return phi_[j - j_min_];
}

const std::vector<double>& DyadicPartition::chi_table(int j) const {
    require(j >= j_min_ - 1 && j <= j_max_ + 1, "low-pass index outside partition range");
    return chi_[j - j_min_ + 1];
}

bool DyadicPartition::truncated(int j) const {
    double ball = (grid_.n() / 2 - 1) * grid_.dk();
    return std::ldexp(8.0 / 3.0, j) > ball;
}

double DyadicPartition::identity_defect() const {
    const auto& k2 = grid_.tables().k2;
    const auto& ny = grid_.tables().nyquist;
    std::vector<char> used(k2_table_size(grid_), 0);
    for (std::size_t i = 0; i < k2.size(); ++i)
        if (!ny[i] && k2[i] > 0) used[k2[i]] = 1;
    double worst = 0;
    for (std::size_t q = 1; q < used.size(); ++q) {
        if (!used[q]) continue;
        double s = 0;
        for (const auto& t : phi_) s += t[q];
        worst = std::max(worst, std::abs(s - 1));
    }
    return worst;
}

DyadicPartition build_partition(const Grid& g, int j_min, int j_max) {
    require(j_min <= j_max, "partition needs j_min <= j_max");
    require(j_max - j_min < 64, "partition range too wide");
    DyadicPartition P;
    P.grid_ = g;
    P.j_min_ = j_min;
    P.j_max_ = j_max;
    for (int j = j_min; j <= j_max; ++j)
        P.phi_.push_back(radial_table(g, [j](double xi) { return lp_phi(std::ldexp(xi, -j)); }));
    for (int j = j_min - 1; j <= j_max + 1; ++j)
        P.chi_.push_back(radial_table(g, [j](double xi) { return lp_chi(std::ldexp(xi, -j)); }));
    require(P.identity_defect() <= 1e-10,
            "partition range does not cover the nonzero spectrum of the grid");
    return P;
}

DyadicPartition build_partition(const Grid& g) {
    int j_min = static_cast<int>(std::floor(std::log2(g.xi_min() * 0.75)));
    int j_max = static_cast<int>(std::ceil(std::log2(g.xi_max() / 1.5)));
    // guard against rounding right at a power of two
    if (std::ldexp(4.0 / 3.0, j_min) > g.xi_min()) --j_min;
    if (std::ldexp(1.5, j_max) < g.xi_max()) ++j_max;
    return build_partition(g, j_min, j_max);
}

Field lp_block(const Field& f, int j, const DyadicPartition& P) {
    require(f.grid() == P.grid(), "partition built for a different grid");
    return apply_k2_table(f, P.phi_table(j));
}

Field low_freq(const Field& f, int j, const DyadicPartition& P) {
    require(f.grid() == P.grid(), "partition built for a different grid");
    return apply_k2_table(f, P.chi_table(j));
}

} // namespace clab
