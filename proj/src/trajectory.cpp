#include "clab/trajectory.hpp"

#include <cmath>

#include "clab/error.hpp"

namespace clab {

void Trajectory::push(double t, Field f) {
    if (times_.empty() && fields_.empty() && grid_.size() == 0) grid_ = f.grid();
    require(f.grid() == grid_, "trajectory sample on a different grid");
    require(std::isfinite(t) && t >= 0, "trajectory times must be finite and non-negative");
    require(times_.empty() || t > times_.back(), "trajectory times must strictly increase");
    times_.push_back(t);
    fields_.push_back(std::move(f));
}

long Trajectory::find(double t) const {
    for (std::size_t i = 0; i < times_.size(); ++i)
        if (times_[i] == t) return static_cast<long>(i);
    return -1;
}

double log_mean_step(double a, double b, double h) {
    if (!(a > 0) || !(b > 0)) return 0.5 * h * (a + b);
    double x = std::log(a / b);
    if (std::abs(x) < 1e-4) {
        // b (e^x - 1) / x
        return h * b * (1 + x / 2 + x * x / 6 + x * x * x / 24);
    }
    return h * (a - b) / x;
}

double integrate_positive(const std::vector<double>& t, const std::vector<double>& v) {
    require(t.size() == v.size(), "integrate: size mismatch");
    double acc = 0;
    for (std::size_t i = 1; i < t.size(); ++i) acc += log_mean_step(v[i - 1], v[i], t[i] - t[i - 1]);
    return acc;
}

double integrate_trapezoid(const std::vector<double>& t, const std::vector<double>& v) {
    require(t.size() == v.size(), "integrate: size mismatch");
    double acc = 0;
    for (std::size_t i = 1; i < t.size(); ++i) acc += 0.5 * (t[i] - t[i - 1]) * (v[i - 1] + v[i]);
    return acc;
}

std::vector<double> log_times(double t_lo, double t_hi, double n_per_efold) {
    require(t_lo > 0 && t_hi > t_lo && n_per_efold > 0, "log_times: bad range");
    int n = static_cast<int>(std::ceil(std::log(t_hi / t_lo) * n_per_efold));
    std::vector<double> t(n + 1);
    double r = std::log(t_hi / t_lo) / n;
    for (int i = 0; i <= n; ++i) t[i] = t_lo * std::exp(r * i);
    t[n] = t_hi;
    return t;
}

} // namespace clab
