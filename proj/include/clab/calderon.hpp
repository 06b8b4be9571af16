#pragma once

#include <vector>

#include "clab/besov.hpp"
#include "clab/field.hpp"
#include "clab/fft.hpp"

namespace clab {

struct SplitConfig {
    int dim = 3;
    double p = 4, q = 8;
    double lambda = 1;
    // derived by make()
    double theta = 0;  // 1/p = theta/2 + (1 - theta)/q
    double s = 0;      // s_p / (1 - theta)
    double eps = 0;    // s - s_q
    // lambda_j = lambda * ||u||_{B^{s_p}_{p,p}} * 2^{j rate}
    double rate = 0;

    // Validates dim < p < q <= infinity, 0 < eps < -s_q and s - d/q > -1.
    static SplitConfig make(int dim, double p, double q, double lambda);
    double threshold(int j, double critical_norm) const;
};

struct SplitResult {
    Field U0, V0;  // both mean-free
    double lambda = 0;
    double critical_norm = 0;  // ||u0||_{B^{s_p}_{p,p}}
    double norm_U = 0;         // ||U0||_{L^2}
    double norm_V = 0;         // ||V0||_{B^s_{q,q}}
    // ||U0|| / (||u||^{p/2} lambda^{1-p/2}) and ||V0|| / (||u||^{p/q} lambda^{1-p/q})
    double const_U = 0, const_V = 0;
    double reassembly = 0;     // rel_diff(U0 + V0, P u0)
    double div_U = 0, div_V = 0;
    std::vector<double> thresholds;  // lambda_j, index 0 = j_min
};

// Caches the blocks of one field so that many thresholds can be tried.
class Splitter {
public:
    Splitter(const Field& u0, const DyadicPartition& P, double p);
    SplitResult split(const SplitConfig& cfg) const;
    double critical_norm() const { return crit_; }

private:
    Field u_, pu_;
    const DyadicPartition* P_;
    double crit_ = 0;
    std::vector<Physical> blocks_;  // physical values per block
    std::vector<rvec> mag2_;        // |Delta_j u|^2 per block
    Physical total_;                // sum of blocks
};

SplitResult split(const Field& u0, const SplitConfig& cfg, const DyadicPartition& P);

struct SweepReport {
    std::vector<double> lambdas, norm_U, norm_V;
    double slope_U = 0, slope_V = 0;        // over the mid-range
    double resid_U = 0, resid_V = 0;        // rms log residual of the fits
    std::vector<int> mid_U, mid_V;          // indices used for each fit
    double max_reassembly = 0;
    bool degenerate = false;                // zero data: everything vanishes
};

// Mid-range: points whose norm lies in [lo, hi] times its saturation value
// (||P u0||_{L^2} for U, ||u0||_{B^s_{q,q}} for V).
struct SweepWindow {
    double lo = 0.05, hi = 0.8;
};

// lambdas geometric, at least 4 of them, spanning at least 2 decades
SweepReport exponent_sweep(const Field& u0, const SplitConfig& cfg,
                           const std::vector<double>& lambdas, const DyadicPartition& P,
                           SweepWindow window = {});

// Least-squares slope of log y against log x; rms residual in *resid.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<int>& idx, double* resid = nullptr);

// Largest lambda (by halving from lambda_start, then bisection) with
// ||V0||_{B^s_{q,q}} < M.
SplitResult split_below(const Field& u0, SplitConfig cfg, const DyadicPartition& P, double M,
                        double lambda_start = 1.0, int max_halvings = 200);

} // namespace clab
