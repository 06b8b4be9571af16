#pragma once

#include <cstddef>
#include <vector>

#include "clab/aligned.hpp"
#include "clab/grid.hpp"

namespace clab {

enum class Rank : int { scalar = 0, vector = 1, matrix = 2 };

int component_count(int dim, Rank r);
const char* rank_name(Rank r);
Rank rank_from_name(const char* s);

// Fourier coefficients u_hat(k) of a real periodic field, normalized so that
// u(x) = sum_k u_hat(k) exp(i xi.x). Components are stored one after another,
// each in row-major FFT order (axis 0 slowest, k = i or i - N).
class Field {
public:
    Field() = default;
    Field(const Grid& g, Rank r);

    const Grid& grid() const { return grid_; }
    Rank rank() const { return rank_; }
    int ncomp() const { return ncomp_; }
    std::size_t size() const { return grid_.size(); }
    bool empty() const { return ncomp_ == 0; }

    cplx* comp(int c) { return data_.data() + c * grid_.size(); }
    const cplx* comp(int c) const { return data_.data() + c * grid_.size(); }
    cplx& at(int c, std::size_t flat) { return data_[c * grid_.size() + flat]; }
    const cplx& at(int c, std::size_t flat) const { return data_[c * grid_.size() + flat]; }
    cvec& data() { return data_; }
    const cvec& data() const { return data_; }

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double a);
    // this += a * o
    Field& axpy(double a, const Field& o);

private:
    Grid grid_;
    Rank rank_ = Rank::scalar;
    int ncomp_ = 0;
    cvec data_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

void check_same_grid(const Field& a, const Field& b);

// L^2 norm via Parseval: L^d * sum |u_hat|^2
double l2_norm(const Field& f);
double l2_norm_sq(const Field& f);
double l2_inner(const Field& a, const Field& b);
// L^2 norm of the gradient (all components)
double grad_l2_norm_sq(const Field& f);
double max_abs_coeff(const Field& f);
// max_k |c(-k) - conj c(k)| / max |c|
double hermitian_defect(const Field& f);
// Replace c(k) by (c(k) + conj c(-k)) / 2 and zero Nyquist modes.
void make_hermitian(Field& f);
void zero_nyquist(Field& f);
void zero_mean(Field& f);
// relative max-coefficient distance
double rel_diff(const Field& a, const Field& b);

// Component c of a vector field as a scalar field.
Field component(const Field& f, int c);

} // namespace clab
