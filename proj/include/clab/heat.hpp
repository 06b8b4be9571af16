#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "clab/besov.hpp"
#include "clab/field.hpp"
#include "clab/trajectory.hpp"

namespace clab {

Field heat_evolve(const Field& f, double t);
// P div F for a matrix field F (row-wise divergence)
Field pdiv(const Field& F);
// e^{t Delta} P div F
Field oseen_apply(const Field& F, double t);

// Tables for one exponential-integrator step of length h over integer |k|^2:
// D <- e D + ca G0 + cb G1, exact when G is linear on the step.
struct StepTables {
    double h = 0;
    std::vector<double> e, ca, cb;
};
StepTables step_tables(const Grid& g, double h);
void exp_step(Field& D, const Field& G0, const Field& G1, const StepTables& st);

// Given samples of G = P div F (vector fields), returns D(t_m) =
// int_0^{t_m} e^{(t_m - s) Delta} G(s) ds at every sample, treating G as
// piecewise linear between samples and constant before the first one.
Trajectory duhamel_march(const Trajectory& G);

struct QuadratureScheme {
    int substeps = 1;          // extra nodes per sample interval (>= 1)
    bool error_estimate = true;
};

struct DuhamelResult {
    Field value;
    // |D_h - D_2h| / 3 in L^2 (second order), or 0 when not requested
    double error_estimate = 0;
};

// Tensor source F(t). Implementations may also supply exact time derivatives.
class Source {
public:
    virtual ~Source() = default;
    virtual const Grid& grid() const = 0;
    virtual Field eval(double t) const = 0;
    // d^m/dt^m F at t; the default refuses m > 0
    virtual Field derivative(double t, int m) const;
};

// F(t) sampled by a trajectory of matrix fields, linear in between.
class SampledSource : public Source {
public:
    explicit SampledSource(Trajectory F);
    const Grid& grid() const override { return F_.grid(); }
    Field eval(double t) const override;
    const Trajectory& samples() const { return F_; }

private:
    Trajectory F_;
};

// F(t) = t^a F0
class PowerLawSource : public Source {
public:
    PowerLawSource(Field F0, double a) : F0_(std::move(F0)), a_(a) {}
    const Grid& grid() const override { return F0_.grid(); }
    Field eval(double t) const override;
    Field derivative(double t, int m) const override;

private:
    Field F0_;
    double a_;
};

// F(t) = (e^{t Delta} w) (x) (e^{t Delta} w)
class HeatProductSource : public Source {
public:
    explicit HeatProductSource(Field w) : w_(std::move(w)) {}
    const Grid& grid() const override { return w_.grid(); }
    Field eval(double t) const override;
    Field derivative(double t, int m) const override;

private:
    Field w_;
};

// Nodes on (0, t]: t 2^-J ... t/8 geometrically, then uniform to t, each
// interval split into `substeps` pieces.
std::vector<double> duhamel_nodes(double t, int J, int uniform, int substeps);

DuhamelResult duhamel_integral(const Trajectory& F, double t, const QuadratureScheme& scheme);
DuhamelResult duhamel_integral(const Source& F, double t, const QuadratureScheme& scheme, int J = 20);

struct KatoExponents {
    double s1, p1, p2;
};

// Throws unless s1 > -2 and d/p1 - d/p2 < 1.
void check_kato_exponents(const KatoExponents& e, int dim);
double kato_s2(const KatoExponents& e, int dim);

struct EstimateRow {
    double s1, p1, p2, s2;
    int k = 0, l = 0;
    double constant = 0;  // measured ratio on the base sampling
    double refined = 0;   // same with doubled samples
    double refinement_ratio() const { return constant == 0 ? 1.0 : refined / constant; }
};

// sup_t t^{-s2/2} t^{k+l/2} ||d_t^k grad^l Duhamel(t)||_{p2} divided by
// sum_{a<=k, b<=l} sup_t t^{-s1/2} t^{a+b/2} ||d_t^a grad^b F(t)||_{p1}, with
// sup over the nodes duhamel_nodes(T, 20, 16, substeps).
double smoothing_ratio(const Source& F, int k, int l, const KatoExponents& e, double T,
                       int substeps);
// k = l = 0, at substeps 1 and 2
EstimateRow verify_kato_estimate(const Source& F, const KatoExponents& e, double T);
EstimateRow verify_smoothing_derivatives(const Source& F, int k, int l, const KatoExponents& e,
                                         double T);

// ||grad^l f||_p with all derivative components in the magnitude
double grad_lp_norm(const Field& f, int l, double p);

// Least-squares slope of log ||e^{t Delta} Delta_j f||_{L^2} against t.
double block_decay_slope(const Field& f, int j, const DyadicPartition& P, int samples = 16);

// CSV rows "s1,p1,p2,s2,k,l,constant,refined,ratio"
std::string estimate_csv(const std::vector<EstimateRow>& rows);

} // namespace clab
