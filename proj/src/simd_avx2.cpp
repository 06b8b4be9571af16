#include <immintrin.h>

#include <algorithm>

#include "clab/simd.hpp"

#define CLAB_AVX2 __attribute__((target("avx2")))

namespace clab::simd {
namespace {

// [a, a, b, b] from two consecutive doubles
CLAB_AVX2 inline __m256d dup_pair(double a, double b) { return _mm256_set_pd(b, b, a, a); }

CLAB_AVX2 void scale_real(cplx* x, const double* m, std::size_t n) {
    double* d = reinterpret_cast<double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m128d mm = _mm_loadu_pd(m + i);
        __m256d md = _mm256_permute4x64_pd(_mm256_castpd128_pd256(mm), 0x50);
        __m256d v = _mm256_loadu_pd(d + 2 * i);
        _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(v, md));
    }
    for (; i < n; ++i) {
        d[2 * i] = d[2 * i] * m[i];
        d[2 * i + 1] = d[2 * i + 1] * m[i];
    }
}

CLAB_AVX2 void gather_scale(const cplx* in, cplx* out, const std::int32_t* idx,
                            const double* table, std::size_t n) {
    const double* s = reinterpret_cast<const double*>(in);
    double* d = reinterpret_cast<double*>(out);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m128i ix = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
        __m256d t = _mm256_i32gather_pd(table, ix, 8);
        __m256d lo = _mm256_permute4x64_pd(t, 0x50);
        __m256d hi = _mm256_permute4x64_pd(t, 0xFA);
        _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(s + 2 * i), lo));
        _mm256_storeu_pd(d + 2 * i + 4, _mm256_mul_pd(_mm256_loadu_pd(s + 2 * i + 4), hi));
    }
    for (; i < n; ++i) {
        double m = table[idx[i]];
        d[2 * i] = s[2 * i] * m;
        d[2 * i + 1] = s[2 * i + 1] * m;
    }
}

CLAB_AVX2 double sum_pow_even(const double* m2, std::size_t n, int p) {
    int h = p / 2;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(m2 + i);
        __m256d r = _mm256_set1_pd(1.0);
        for (int e = 0; e < h; ++e) r = _mm256_mul_pd(r, v);
        acc = _mm256_add_pd(acc, r);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) {
        double v = m2[i], r = 1.0;
        for (int e = 0; e < h; ++e) r = r * v;
        total += r;
    }
    return total;
}

CLAB_AVX2 double max_value(const double* x, std::size_t n) {
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, _mm256_loadu_pd(x + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, m);
    double r = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; i < n; ++i) r = std::max(r, x[i]);
    return r;
}

CLAB_AVX2 void accum_square(double* m2, const double* x, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(m2 + i, _mm256_add_pd(_mm256_loadu_pd(m2 + i), _mm256_mul_pd(v, v)));
    }
    for (; i < n; ++i) m2[i] = m2[i] + x[i] * x[i];
}

CLAB_AVX2 void accum_above(double* big, const double* x, const double* m2, double lam2,
                           std::size_t n) {
    __m256d l = _mm256_set1_pd(lam2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(m2 + i), l, _CMP_GT_OQ);
        __m256d b = _mm256_loadu_pd(big + i);
        __m256d s = _mm256_add_pd(b, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(big + i, _mm256_blendv_pd(b, s, mask));
    }
    for (; i < n; ++i)
        if (m2[i] > lam2) big[i] = big[i] + x[i];
}

CLAB_AVX2 void accum_product(double* out, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), p));
    }
    for (; i < n; ++i) out[i] = out[i] + a[i] * b[i];
}

CLAB_AVX2 void exp_step(cplx* d, const cplx* g0, const cplx* g1, const std::int32_t* idx,
                        const double* e, const double* ca, const double* cb, std::size_t n) {
    double* D = reinterpret_cast<double*>(d);
    const double* A = reinterpret_cast<const double*>(g0);
    const double* B = reinterpret_cast<const double*>(g1);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        int k0 = idx[i], k1 = idx[i + 1];
        __m256d te = dup_pair(e[k0], e[k1]);
        __m256d ta = dup_pair(ca[k0], ca[k1]);
        __m256d tb = dup_pair(cb[k0], cb[k1]);
        __m256d t = _mm256_mul_pd(te, _mm256_loadu_pd(D + 2 * i));
        __m256d u = _mm256_mul_pd(ta, _mm256_loadu_pd(A + 2 * i));
        __m256d w = _mm256_mul_pd(tb, _mm256_loadu_pd(B + 2 * i));
        _mm256_storeu_pd(D + 2 * i, _mm256_add_pd(_mm256_add_pd(t, u), w));
    }
    for (; i < n; ++i) {
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

const Kernels* avx2_table() {
    static const Kernels k{"avx2",       scale_real,   gather_scale, sum_pow_even, max_value,
                           accum_square, accum_above, accum_product, exp_step};
    return &k;
}

} // namespace clab::simd
