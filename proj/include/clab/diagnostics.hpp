#pragma once

#include <array>
#include <string>
#include <vector>

#include "clab/besov.hpp"
#include "clab/mild.hpp"
#include "clab/trajectory.hpp"

namespace clab {

// ||u(t)||_{L^p} (T_end - t)^{(1 - d/p)/2} at every sample; p <= d is refused.
std::vector<double> leray_monitor(const Trajectory& u, double p, double t_end);

// u'(x) = 2^m u(2^m x + x0), x0 = shift * L / N. With keep_box = false the
// box shrinks to L / 2^m and coefficients are reused (lossless); with
// keep_box = true mode k moves to 2^m k on the same grid, refused when a
// nonzero mode would leave the grid or land on a non-integer wavevector.
struct RescaleSpec {
    int m = 0;
    std::array<int, 3> shift{0, 0, 0};
    double t0 = 0;
    bool keep_box = false;
};
// refuses lambda that is not a positive power of two (or 1 / power of two)
RescaleSpec rescale_spec(double lambda, std::array<int, 3> shift = {0, 0, 0}, double t0 = 0,
                         bool keep_box = false);
Field rescale(const Field& f, const RescaleSpec& s);
// u'(x, t) = lambda u(lambda x + x0, t0 + lambda^2 t): samples before t0 are
// dropped and times map to (t - t0) / lambda^2.
Trajectory rescale(const Trajectory& tr, const RescaleSpec& s);

// ||u(t)||_{B^{s_p}_{p,q}} at every sample
std::vector<double> critical_norm_series(const Trajectory& tr, double p, double q);

// <u, lambda^{-2} phi(./lambda)> with phi the unit-mass bump of radius 1
// centred at the origin; vector fields give one pairing per component.
struct VanishingRow {
    double lambda = 0;
    std::vector<double> pairing;
    double magnitude = 0;
};
// lambda must lie in [2 L / N, L / 2]
std::vector<VanishingRow> vanishing_test(const Field& u, const std::vector<double>& lambdas);
// true when magnitudes strictly decrease over the last `count` rows, which are
// taken in order of decreasing lambda
bool decays_over_last(const std::vector<VanishingRow>& rows, int count);

struct DiagnosticsOptions {
    std::vector<double> lp_set{4, 6, kInf};
    double besov_p = 4, besov_q = 4;
    double t_end = 0;                   // 0: last sample time
    std::string t_end_source = "horizon";
    Trajectory background;              // for the energy balance; empty = zero
};

struct DiagnosticsReport {
    std::vector<double> times;
    std::vector<double> lp_exponents;
    std::vector<std::vector<double>> lp;      // lp[i][n] = ||u(t_n)||_{p_i}
    std::vector<double> besov;
    std::vector<std::vector<double>> leray;   // for the exponents above d only
    std::vector<double> leray_exponents;
    std::vector<double> energy_residual;      // |slack| at t_n, 0 at the first sample
    std::vector<double> energy_slack;
    std::vector<double> divergence;
    double t_end = 0;
    std::string t_end_source;
    double energy_scale = 0;
};

DiagnosticsReport diagnose(const Trajectory& u, const DiagnosticsOptions& opt);

// JSON object and per-series CSV text
std::string diagnostics_json(const DiagnosticsReport& r);
std::string diagnostics_csv(const DiagnosticsReport& r);

} // namespace clab
