#include <cmath>
#include <cstdlib>
#include <cstring>

#include "clab/simd.hpp"

namespace clab::simd {

#ifdef CLAB_HAVE_AVX2
const Kernels* avx2_table();
#endif

const Kernels* avx2_kernels() {
#ifdef CLAB_HAVE_AVX2
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok ? avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

namespace {

thread_local const Kernels* tl_override = nullptr;

const Kernels& pick_default() {
    const char* env = std::getenv("CLAB_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return scalar_kernels();
    if (const Kernels* k = avx2_kernels()) return *k;
    return scalar_kernels();
}

} // namespace

const Kernels& active() {
    if (tl_override) return *tl_override;
    static const Kernels& chosen = pick_default();
    return chosen;
}

ScopedOverride::ScopedOverride(const Kernels& k) : prev_(tl_override) { tl_override = &k; }
ScopedOverride::~ScopedOverride() { tl_override = prev_; }

double sum_pow(const double* m2, std::size_t n, double p) {
    double r = std::nearbyint(p);
    if (r == p && r >= 2 && r <= 16 && static_cast<int>(r) % 2 == 0)
        return active().sum_pow_even(m2, n, static_cast<int>(r));
    double acc = 0.0, h = 0.5 * p;
    for (std::size_t i = 0; i < n; ++i) acc += std::pow(m2[i], h);
    return acc;
}

} // namespace clab::simd
