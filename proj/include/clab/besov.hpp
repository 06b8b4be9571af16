#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "clab/field.hpp"
#include "clab/fft.hpp"
#include "clab/trajectory.hpp"

namespace clab {

constexpr double kInf = std::numeric_limits<double>::infinity();

// -1 + dim/p, the exponent left invariant by u -> lambda u(lambda x)
double critical_exponent(int dim, double p);

struct BesovIndex {
    double s = 0;
    double p = 2;
    double q = 2;
    double r = std::numeric_limits<double>::quiet_NaN();  // time exponent, if any

    static BesovIndex critical(int dim, double p, double q);
    bool is_critical(int dim) const;
};

struct BlockValue {
    int j = 0;
    double contrib = 0;
    bool truncated = false;
};

struct NormReport {
    BesovIndex index;
    double value = 0;
    std::vector<BlockValue> blocks;
    bool truncated = false;
    // smallest j attaining the max block (meaningful for q = infinity)
    int argmax_j = 0;
};

// l^q aggregation of the block contributions; fills value and argmax_j.
void aggregate(NormReport& r);

// Smooth radial step: 1 for r <= 3/4, 0 for r >= 4/3.
double lp_chi(double r);
// chi(r/2) - chi(r), supported in [3/4, 8/3].
double lp_phi(double r);

class DyadicPartition {
public:
    const Grid& grid() const { return grid_; }
    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }
    int count() const { return j_max_ - j_min_ + 1; }

    // phi(2^-j xi) tabulated over integer |k|^2; j in [j_min, j_max]
    const std::vector<double>& phi_table(int j) const;
    // chi(2^-j xi); j in [j_min - 1, j_max + 1]
    const std::vector<double>& chi_table(int j) const;
    // block annulus reaches past the largest retained |xi|
    bool truncated(int j) const;
    // max |sum_j phi - 1| over the nonzero retained spectrum
    double identity_defect() const;

    friend DyadicPartition build_partition(const Grid& g, int j_min, int j_max);

private:
    Grid grid_;
    int j_min_ = 0, j_max_ = -1;
    std::vector<std::vector<double>> phi_, chi_;
};

// Rejects ranges whose blocks do not sum to one on the nonzero spectrum.
DyadicPartition build_partition(const Grid& g, int j_min, int j_max);
// Smallest range covering the grid.
DyadicPartition build_partition(const Grid& g);

Field lp_block(const Field& f, int j, const DyadicPartition& P);
Field low_freq(const Field& f, int j, const DyadicPartition& P);

// ||Delta_j f||_{L^p} for every block, index 0 = j_min
std::vector<double> block_lp_norms(const Field& f, const DyadicPartition& P, double p);

NormReport besov_norm(const Field& f, const BesovIndex& idx, const DyadicPartition& P);

// Kato norm || t^{-s/2} ||u(t)||_p ||_{L^q(dt/t)}; samples at t = 0 are
// skipped. Finite q uses the trapezoid rule in log t.
NormReport kato_norm(const Trajectory& tr, const BesovIndex& idx);
// (t, t^{-s/2} ||u(t)||_p) for every sample with t > 0
std::vector<std::pair<double, double>> kato_decay_profile(const Trajectory& tr, double s, double p);

// Kato norm of the heat flow of u0 on (0, infinity) with log-uniform times;
// the two sides of the caloric equivalence are this and besov_norm.
double caloric_norm(const Field& u0, const BesovIndex& idx, double per_efold = 8);

// ||2^{js} ||Delta_j u||_{L^r_t L^p_x}||_{l^q}. Throws when the time
// quadrature, compared against every-other-sample, is off by more than 1%.
NormReport timespace_besov_norm(const Trajectory& tr, double r, const BesovIndex& idx,
                                const DyadicPartition& P);

// sup ||U||^2 + 2 int ||grad U||^2 over the sample span (squared energy norm)
double energy_norm(const Trajectory& tr);
// ||U||_{L^m_t L^n_x} / sqrt(energy_norm); requires 2/m + d/n = d/2
double interpolation_check(const Trajectory& tr, double m, double n);

// Homogeneous Sobolev norm sqrt(L^d sum |xi|^{2s} |c|^2), k = 0 excluded.
double hdot_norm(const Field& f, double s);

// ||grad Delta_j f||_p / (2^j ||Delta_j f||_p)
double bernstein_ratio(const Field& f, int j, double p, const DyadicPartition& P);

struct Paraproduct {
    Field t_uv;  // sum_j S_{j-1}u Delta_j v
    Field t_vu;
    Field r_uv;  // sum_{|j-j'|<=1} Delta_j u Delta_j' v
};

// Scalar fields. Each piece is dealiased like dealias_product.
Paraproduct paraproduct(const Field& u, const Field& v, const DyadicPartition& P);

struct ParaExponents {
    double s1, p1, q1;
    double s2, p2, q2;
    double p, q;
};

// ||T_u v||_{B^{s1+s2}_{p,q}} / (||u||_{B^{s1}_{p1,q1}} ||v||_{B^{s2}_{p2,q2}}); needs s1 < 0
double paraproduct_t_ratio(const Field& u, const Field& v, const ParaExponents& e,
                           const DyadicPartition& P);
// same for R(u, v); needs s1 + s2 > 0
double paraproduct_r_ratio(const Field& u, const Field& v, const ParaExponents& e,
                           const DyadicPartition& P);

} // namespace clab
