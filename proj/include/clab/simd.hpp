#pragma once

// Hot loops over coefficient and grid arrays. Each kernel has a scalar
// reference and, on x86-64, an AVX2 variant picked at runtime. Elementwise
// kernels agree bit for bit between variants (no FMA contraction); reductions
// differ only in summation order.

#include <cstddef>
#include <cstdint>

#include "clab/aligned.hpp"

namespace clab::simd {

struct Kernels {
    const char* name;
    // x[i] *= m[i]
    void (*scale_real)(cplx* x, const double* m, std::size_t n);
    // out[i] = in[i] * table[idx[i]]
    void (*gather_scale)(const cplx* in, cplx* out, const std::int32_t* idx, const double* table,
                         std::size_t n);
    // sum of m2[i]^(p/2); p must be a positive even integer
    double (*sum_pow_even)(const double* m2, std::size_t n, int p);
    double (*max_value)(const double* x, std::size_t n);
    // m2[i] += x[i]*x[i]
    void (*accum_square)(double* m2, const double* x, std::size_t n);
    // big[i] += x[i] where m2[i] > lam2 (ties go to the small part)
    void (*accum_above)(double* big, const double* x, const double* m2, double lam2, std::size_t n);
    // out[i] += a[i]*b[i]
    void (*accum_product)(double* out, const double* a, const double* b, std::size_t n);
    // d[i] = e[idx]*d[i] + ca[idx]*g0[i] + cb[idx]*g1[i]
    void (*exp_step)(cplx* d, const cplx* g0, const cplx* g1, const std::int32_t* idx,
                     const double* e, const double* ca, const double* cb, std::size_t n);
};

const Kernels& scalar_kernels();
// nullptr when not compiled in or not supported by the CPU.
const Kernels* avx2_kernels();

// Active table: CLAB_SIMD=scalar in the environment forces the reference
// path; otherwise AVX2 when the CPU has it.
const Kernels& active();

// Test hook: forces a table for the current thread while alive.
class ScopedOverride {
public:
    explicit ScopedOverride(const Kernels& k);
    ~ScopedOverride();
    ScopedOverride(const ScopedOverride&) = delete;
    ScopedOverride& operator=(const ScopedOverride&) = delete;

private:
    const Kernels* prev_;
};

// sum |v|^p for arbitrary real p >= 1, given squared magnitudes
double sum_pow(const double* m2, std::size_t n, double p);

} // namespace clab::simd
