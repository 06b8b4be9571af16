#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

#include "clab/error.hpp"
#include "clab/spectral_ops.hpp"

namespace clab {
namespace {

struct GaussLegendre {
    std::vector<double> x, w;  // on [0, 1]
};

// Newton on P_n using the three-term recurrence.
GaussLegendre gauss_legendre(int n) {
    GaussLegendre q;
    q.x.resize(n);
    q.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5)), dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        q.x[i] = 0.5 * (1 - z);
        q.w[i] = 1.0 / ((1 - z * z) * dp * dp);
    }
    return q;
}

const GaussLegendre& nodes() {
    static const GaussLegendre q = gauss_legendre(320);
    return q;
}

double bump(double r) { return r < 1 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0; }

} // namespace

double Mollifier::theta(double r) const { return mass_const * bump(r); }

double Mollifier::theta_hat(double kappa) const {
    const auto& q = nodes();
    double acc = 0;
    for (std::size_t i = 0; i < q.x.size(); ++i) {
        double r = q.x[i], kr = kappa * r, v;
        if (dim == 3) {
            double sinc = kr == 0 ? 1.0 : std::sin(kr) / kr;
            v = 4 * std::numbers::pi * r * r * sinc;
        } else {
            v = 2 * std::numbers::pi * r * std::cyl_bessel_j(0.0, kr);
        }
        acc += q.w[i] * bump(r) * v;
    }
    return mass_const * acc;
}

Mollifier make_mollifier(int dim, double rho) {
    require(dim == 2 || dim == 3, "mollifier dimension must be 2 or 3");
    require(std::isfinite(rho) && rho > 0, "mollifier radius must be positive");
    Mollifier m;
    m.dim = dim;
    m.rho = rho;
    m.mass_const = 1.0;
    m.mass_const = 1.0 / m.theta_hat(0.0);
    return m;
}

Field mollify(const Field& f, const Mollifier& m) {
    const Grid& g = f.grid();
    require(m.dim == g.dim(), "mollifier dimension differs from grid");
    require(m.rho > 0 && m.rho < g.box(), "mollifier radius must lie in (0, L)");
    return apply_radial(f, [&](double xi) { return m.theta_hat(m.rho * xi); });
}

} // namespace clab
