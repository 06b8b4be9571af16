#include <algorithm>
#include <cmath>

#include "clab/simd.hpp"

namespace clab::simd {
namespace {

void scale_real(cplx* x, const double* m, std::size_t n) {
    double* d = reinterpret_cast<double*>(x);
    for (std::size_t i = 0; i < n; ++i) {
        d[2 * i] = d[2 * i] * m[i];
        d[2 * i + 1] = d[2 * i + 1] * m[i];
    }
}

void gather_scale(const cplx* in, cplx* out, const std::int32_t* idx, const double* table,
                  std::size_t n) {
    const double* s = reinterpret_cast<const double*>(in);
    double* d = reinterpret_cast<double*>(out);
    for (std::size_t i = 0; i < n; ++i) {
        double m = table[idx[i]];
        d[2 * i] = s[2 * i] * m;
        d[2 * i + 1] = s[2 * i + 1] * m;
    }
}

double sum_pow_even(const double* m2, std::size_t n, int p) {
    int h = p / 2;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = m2[i], r = 1.0;
        for (int e = 0; e < h; ++e) r = r * v;
        acc += r;
    }
    return acc;
}

double max_value(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, x[i]);
    return m;
}

void accum_square(double* m2, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) m2[i] = m2[i] + x[i] * x[i];
}

void accum_above(double* big, const double* x, const double* m2, double lam2, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (m2[i] > lam2) big[i] = big[i] + x[i];
}

void accum_product(double* out, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = out[i] + a[i] * b[i];
}

void exp_step(cplx* d, const cplx* g0, const cplx* g1, const std::int32_t* idx, const double* e,
              const double* ca, const double* cb, std::size_t n) {
    double* D = reinterpret_cast<double*>(d);
    const double* A = reinterpret_cast<const double*>(g0);
    const double* B = reinterpret_cast<const double*>(g1);
    for (std::size_t i = 0; i < n; ++i) {
        int k = idx[i];
        for (int c = 0; c < 2; ++c) {
            double t = e[k] * D[2 * i + c];
            double u = ca[k] * A[2 * i + c];
            double w = cb[k] * B[2 * i + c];
            D[2 * i + c] = (t + u) + w;
        }
    }
}

} // namespace

const Kernels& scalar_kernels() {
    static const Kernels k{"scalar",     scale_real,   gather_scale, sum_pow_even, max_value,
                           accum_square, accum_above, accum_product, exp_step};
    return k;
}

} // namespace clab::simd
