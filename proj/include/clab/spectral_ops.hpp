#pragma once

#include <array>
#include <functional>

#include "clab/field.hpp"

namespace clab {

using Symbol = std::function<double(const std::array<double, 3>& xi)>;
using RadialSymbol = std::function<double(double xi_abs)>;

// coeff(k) *= m(xi_k). Throws if m is non-finite anywhere on the grid.
Field apply_multiplier(const Field& f, const Symbol& m);
// Radial symbols are tabulated once per distinct |k|^2.
Field apply_radial(const Field& f, const RadialSymbol& m);
// Table indexed by integer |k|^2, length k2_table_size(grid).
std::size_t k2_table_size(const Grid& g);
std::vector<double> radial_table(const Grid& g, const RadialSymbol& m);
Field apply_k2_table(const Field& f, const std::vector<double>& table);
void apply_k2_table_inplace(Field& f, const std::vector<double>& table);

// delta_ij - xi_i xi_j / |xi|^2; the k = 0 mode passes through.
Field leray_project(const Field& u);
void leray_project_inplace(Field& u);
// max_k |xi . u_hat(k)| / max |u_hat|
double divergence_defect(const Field& u);

Field divergence(const Field& f);  // vector -> scalar, matrix -> vector (row-wise)
Field gradient(const Field& g);    // scalar -> vector
Field curl(const Field& u);        // 3D vector -> vector, 2D vector -> scalar
Field laplacian(const Field& f);

// 2/3 rule: zero every mode with some |k_axis| > N/3, and Nyquist modes.
void dealias_inplace(Field& f);
Field dealias(const Field& f);
// Pointwise product in grid space, then 2/3 truncation. vector x vector gives
// the matrix (u_i v_j); scalar x scalar, scalar x vector as expected.
Field dealias_product(const Field& u, const Field& v);

// (-Delta)^{-1} div div (u (x) v), mean mode zero.
Field pressure_from_velocity(const Field& u, const Field& v);
// same, starting from a tensor
Field pressure_from_tensor(const Field& F);

// Transpose of a matrix field.
Field transpose(const Field& F);

struct Mollifier {
    int dim = 3;
    double rho = 0;
    double mass_const = 0;  // c in theta = c exp(-1/(1 - r^2))

    // unscaled kernel theta(x) at |x| = r
    double theta(double r) const;
    // Fourier transform of the unscaled kernel at |kappa|
    double theta_hat(double kappa) const;
};

Mollifier make_mollifier(int dim, double rho);
// rho must be positive and below the box length
Field mollify(const Field& f, const Mollifier& m);

} // namespace clab
