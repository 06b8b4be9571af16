#pragma once

#include <vector>

#include "clab/field.hpp"

namespace clab {

// Time samples of a field. Times strictly increase; t = 0 is allowed as the
// first sample (initial data).
class Trajectory {
public:
    Trajectory() = default;
    explicit Trajectory(const Grid& g) : grid_(g) {}

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return times_.size(); }
    bool empty() const { return times_.empty(); }
    const std::vector<double>& times() const { return times_; }
    double time(std::size_t i) const { return times_[i]; }
    const Field& field(std::size_t i) const { return fields_[i]; }
    Field& field(std::size_t i) { return fields_[i]; }
    const std::vector<Field>& fields() const { return fields_; }
    double t_end() const { return times_.back(); }

    void push(double t, Field f);
    // index of the sample at time t (exact match), or -1
    long find(double t) const;

private:
    Grid grid_;
    std::vector<double> times_;
    std::vector<Field> fields_;
};

// Exponential-fit rule for a positive integrand on [t0, t0 + h]:
// h (a - b) / ln(a / b); falls back to the trapezoid when a or b is not
// positive. Exact for a e^{-c t}.
double log_mean_step(double a, double b, double h);

// Integral of samples over [times.front(), times.back()] with log_mean_step.
double integrate_positive(const std::vector<double>& times, const std::vector<double>& v);
double integrate_trapezoid(const std::vector<double>& times, const std::vector<double>& v);

// Log-uniform time grid with n_per_efold points per factor e, both ends included.
std::vector<double> log_times(double t_lo, double t_hi, double n_per_efold);

} // namespace clab
