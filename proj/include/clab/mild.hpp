#pragma once

#include <memory>
#include <vector>

#include "clab/field.hpp"
#include "clab/picard.hpp"
#include "clab/trajectory.hpp"

namespace clab {

// Fields on a fixed list of sample times; the Picard space for the solvers.
struct SpaceTime {
    std::shared_ptr<const std::vector<double>> times;
    std::vector<Field> f;

    std::size_t size() const { return f.size(); }
    Trajectory to_trajectory() const;
    static SpaceTime from_trajectory(const Trajectory& tr);
};

SpaceTime operator+(const SpaceTime& a, const SpaceTime& b);
SpaceTime operator-(const SpaceTime& a, const SpaceTime& b);
SpaceTime operator*(double s, const SpaceTime& a);

struct SolverConfig {
    double T = 1.0;
    int J = 20;            // first positive sample at T 2^-J
    int uniform = 16;      // uniform intervals on [T/8, T]
    int substeps = 1;      // refinement of every interval
    double tolerance = 1e-10;
    int max_iterations = 60;
    double kato_p = 4;     // X = K_p, the critical Kato space
    bool measure_constants = false;  // estimate gamma and ||L|| with random probes
    int probes = 20;
    std::uint64_t probe_seed = 12345;

    // {0} and the Duhamel nodes on (0, T]
    std::vector<double> schedule() const;
};

// sup_{t>0} t^{-s_p/2} ||u(t)||_{L^p}, s_p = -1 + d/p
double kato_critical_norm(const SpaceTime& u, double p);
// max(kato_critical_norm, sup_t ||u(t)||_{L^2})
double kato_energy_norm(const SpaceTime& u, double p);

// e^{t Delta} u0 on the schedule
SpaceTime heat_seed(const Field& u0, const std::shared_ptr<const std::vector<double>>& times);
// int_0^t e^{(t-s)Delta} P div (v (x) (w)_rho) ds at every sample; rho = 0
// means no mollification
SpaceTime bilinear_b(const SpaceTime& v, const SpaceTime& w, double rho = 0);
// Same operator through an independent path: every interval split in two with
// the source's midpoint value, marched with half steps.
SpaceTime bilinear_b_check(const SpaceTime& v, const SpaceTime& w, double rho = 0);

struct SolveResult {
    Trajectory trajectory;
    FixedPointReport report;
    double integral_residual = 0;  // X-norm, via bilinear_b_check
    double max_divergence = 0;     // worst divergence_defect over samples
};

// u = e^{t Delta} u0 - B(u, u)
SolveResult mild_solve_nse(const Field& u0, const SolverConfig& cfg);
PicardProblem<SpaceTime> nse_problem(const Field& u0, const SolverConfig& cfg);

// W = e^{t Delta} U0 - B(W, W) - B(W, V) - B(V, W); V sampled on cfg.schedule()
SolveResult mild_solve_perturbed(const Field& U0, const Trajectory& V, const SolverConfig& cfg);

struct EnergyLedger {
    std::vector<double> t2;         // right endpoints; left endpoint is the first sample
    std::vector<double> lhs;        // ||U(t2)||^2 + 2 int ||grad U||^2
    std::vector<double> rhs;        // ||U(t1)||^2 + 2 int int a (x) U : grad U
    std::vector<double> residual;   // |lhs - rhs|
    std::vector<double> slack;      // rhs - lhs
    double max_residual = 0;
    double min_slack = 0;
    double energy_scale = 0;        // squared energy norm of U
};

// Balance from the first sample to every later one. a empty means zero; a
// must share U's times otherwise. The dissipation integral uses the
// exponential fit per mode, the a-term the trapezoid rule.
EnergyLedger energy_ledger(const Trajectory& U, const Trajectory& a);

struct MollifiedResult {
    SolveResult solve;
    EnergyLedger ledger;
};

// U = e^{t Delta} U0 - B_rho(U, U) - L(U), L(w) = B(a, w) + B(w, b)
// (advected by b). a or b may be empty trajectories (zero).
MollifiedResult mollified_solve(const Field& U0, const Trajectory& a, const Trajectory& b,
                                double rho, const SolverConfig& cfg);

// T = (kappa / M)^{2/eps}, M = ||V0||_{B^{s_q+eps}_{q,q}}; horizon cap when M = 0.
struct ExistenceTime {
    double M = 0;
    double T = 0;
    bool capped = false;
};
ExistenceTime subcritical_existence_time(const Field& V0, double q, double eps, double kappa,
                                         double cap = 1.0);
// calibrated kappa for (q, eps) = (8, 1/4) in 3D
double default_kappa(double q, double eps);

// Largest horizon (by bisection on a log scale) where mild_solve_nse converges.
double max_converging_horizon(const Field& u0, const SolverConfig& base, double t_lo, double t_hi,
                              int steps = 12);

// Continuation: re-seeds from the end state while Picard converges, halving
// the step on divergence; halts once the step falls below floor.
struct ContinuationResult {
    Trajectory trajectory;
    std::vector<double> steps;  // accepted step lengths
    bool blowup_suspected = false;
    double t_end = 0;
    double max_integral_residual = 0;
    double max_divergence = 0;
    std::vector<std::vector<double>> increments;  // Picard history per accepted step
    std::vector<double> rejected;                 // step lengths that failed
};
ContinuationResult continue_solution(const Field& u0, double horizon, double step,
                                     double floor, const SolverConfig& base);

} // namespace clab
