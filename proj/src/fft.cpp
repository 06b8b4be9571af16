#include "clab/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include "clab/error.hpp"
#include "clab/simd.hpp"

namespace clab {
namespace {

struct PlanCache {
    std::mutex mu;
    std::map<std::tuple<int, int, int>, fftw_plan> plans;

    ~PlanCache() {
        for (auto& [key, p] : plans) fftw_destroy_plan(p);
    }
};

PlanCache& plan_cache() {
    static PlanCache c;
    return c;
}

fftw_plan get_plan(const Grid& g, int sign) {
    PlanCache& c = plan_cache();
    std::lock_guard<std::mutex> lock(c.mu);
    auto key = std::make_tuple(g.dim(), g.n(), sign);
    auto it = c.plans.find(key);
    if (it != c.plans.end()) return it->second;
    int dims[3] = {g.n(), g.n(), g.n()};
    cvec scratch(g.size());
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan p = fftw_plan_dft(g.dim(), dims, buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    if (!p) throw std::runtime_error("FFTW plan creation failed");
    c.plans.emplace(key, p);
    return p;
}

} // namespace

void fft_inplace(const Grid& g, cplx* data, int sign) {
    fftw_plan p = get_plan(g, sign);
    auto* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, d, d);
}

void inverse_pair(const Grid& g, const cplx* a, const cplx* b, double* ra, double* rb) {
    const std::size_t n = g.size();
    cvec z(n);
    if (b) {
        for (std::size_t i = 0; i < n; ++i)
            z[i] = cplx(a[i].real() - b[i].imag(), a[i].imag() + b[i].real());
    } else {
        for (std::size_t i = 0; i < n; ++i) z[i] = a[i];
    }
    fft_inplace(g, z.data(), +1);
    for (std::size_t i = 0; i < n; ++i) ra[i] = z[i].real();
    if (b && rb)
        for (std::size_t i = 0; i < n; ++i) rb[i] = z[i].imag();
}

void forward_pair(const Grid& g, const double* ra, const double* rb, cplx* a, cplx* b) {
    const std::size_t n = g.size();
    cvec z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = cplx(ra[i], rb ? rb[i] : 0.0);
    fft_inplace(g, z.data(), -1);
    const double s = 1.0 / static_cast<double>(n);
    const auto& ny = g.tables().nyquist;
    for (std::size_t i = 0; i < n; ++i) {
        if (ny[i]) {
            a[i] = 0;
            if (b) b[i] = 0;
            continue;
        }
        cplx zk = z[i], zm = std::conj(z[g.neg(i)]);
        a[i] = 0.5 * s * (zk + zm);
        if (b) {
            cplx d = 0.5 * s * (zk - zm);
            b[i] = cplx(d.imag(), -d.real());
        }
    }
}

Physical to_physical(const Field& f) {
    const Grid& g = f.grid();
    Physical ph(f.ncomp(), rvec(g.size()));
    for (int c = 0; c < f.ncomp(); c += 2) {
        bool two = c + 1 < f.ncomp();
        inverse_pair(g, f.comp(c), two ? f.comp(c + 1) : nullptr, ph[c].data(),
                     two ? ph[c + 1].data() : nullptr);
    }
    return ph;
}

rvec to_physical(const Field& f, int c) {
    rvec r(f.size());
    inverse_pair(f.grid(), f.comp(c), nullptr, r.data(), nullptr);
    return r;
}

Field from_physical(const Grid& g, Rank r, const Physical& ph) {
    Field f(g, r);
    require(static_cast<int>(ph.size()) == f.ncomp(), "component count mismatch");
    for (int c = 0; c < f.ncomp(); c += 2) {
        bool two = c + 1 < f.ncomp();
        forward_pair(g, ph[c].data(), two ? ph[c + 1].data() : nullptr, f.comp(c),
                     two ? f.comp(c + 1) : nullptr);
    }
    return f;
}

rvec magnitude_sq(const Physical& ph) {
    require(!ph.empty(), "empty physical field");
    rvec m2(ph[0].size(), 0.0);
    const auto& k = simd::active();
    for (const auto& c : ph) k.accum_square(m2.data(), c.data(), c.size());
    return m2;
}

double lp_norm_from_mag2(const Grid& g, const rvec& m2, double p) {
    require(p >= 1, "L^p exponent must be at least 1");
    if (std::isinf(p)) return std::sqrt(simd::active().max_value(m2.data(), m2.size()));
    double s = simd::sum_pow(m2.data(), m2.size(), p);
    return std::pow(s * g.cell_volume(), 1.0 / p);
}

double lp_norm(const Grid& g, const Physical& ph, double p) {
    return lp_norm_from_mag2(g, magnitude_sq(ph), p);
}

double lp_norm(const Field& f, double p) { return lp_norm(f.grid(), to_physical(f), p); }

} // namespace clab
