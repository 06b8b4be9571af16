#pragma once

#include <vector>

#include "clab/field.hpp"

namespace clab {

// Grid values of a field, one array per component.
using Physical = std::vector<rvec>;

// In-place unnormalized c2c transform over the full grid. sign = -1 forward,
// +1 inverse.
void fft_inplace(const Grid& g, cplx* data, int sign);

// Two real fields per complex transform. b / rb may be null.
void inverse_pair(const Grid& g, const cplx* a, const cplx* b, double* ra, double* rb);
// Forward with 1/N^dim normalization; Nyquist modes of the result are zeroed.
void forward_pair(const Grid& g, const double* ra, const double* rb, cplx* a, cplx* b);

Physical to_physical(const Field& f);
rvec to_physical(const Field& f, int c);
Field from_physical(const Grid& g, Rank r, const Physical& ph);

// pointwise Euclidean |v|^2 over components
rvec magnitude_sq(const Physical& ph);
// (cell volume * sum |v|^p)^(1/p); p = infinity gives the grid max
double lp_norm_from_mag2(const Grid& g, const rvec& m2, double p);
double lp_norm(const Grid& g, const Physical& ph, double p);
double lp_norm(const Field& f, double p);

} // namespace clab
