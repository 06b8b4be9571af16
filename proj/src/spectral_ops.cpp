#include "clab/spectral_ops.hpp"

#include <cmath>

#include "clab/error.hpp"
#include "clab/fft.hpp"
#include "clab/simd.hpp"

namespace clab {

namespace {

std::array<double, 3> xi_at(const Grid& g, std::size_t i) {
    std::array<double, 3> xi{0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) xi[a] = g.xi(i, a);
    return xi;
}

void require_rank(const Field& f, Rank r, const char* op) {
    require(f.rank() == r, std::string(op) + ": expected a " + rank_name(r) + " field");
}

} // namespace

Field apply_multiplier(const Field& f, const Symbol& m) {
    const Grid& g = f.grid();
    rvec vals(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double v = m(xi_at(g, i));
        require(std::isfinite(v), "multiplier is not finite at some grid wavevector");
        vals[i] = v;
    }
    Field out = f;
    const auto& k = simd::active();
    for (int c = 0; c < out.ncomp(); ++c) k.scale_real(out.comp(c), vals.data(), g.size());
    return out;
}

std::size_t k2_table_size(const Grid& g) {
    std::size_t h = g.n() / 2;
    return g.dim() * h * h + 1;
}

std::vector<double> radial_table(const Grid& g, const RadialSymbol& m) {
    std::vector<double> t(k2_table_size(g), 0.0);
    std::vector<char> used(t.size(), 0);
    for (auto k2 : g.tables().k2) used[k2] = 1;
    for (std::size_t q = 0; q < t.size(); ++q) {
        if (!used[q]) continue;
        double v = m(g.dk() * std::sqrt(static_cast<double>(q)));
        require(std::isfinite(v), "radial multiplier is not finite at some grid wavevector");
        t[q] = v;
    }
    return t;
}

void apply_k2_table_inplace(Field& f, const std::vector<double>& table) {
    const Grid& g = f.grid();
    require(table.size() >= k2_table_size(g), "k2 table too short for grid");
    const auto& k = simd::active();
    for (int c = 0; c < f.ncomp(); ++c)
        k.gather_scale(f.comp(c), f.comp(c), g.tables().k2.data(), table.data(), g.size());
}

Field apply_k2_table(const Field& f, const std::vector<double>& table) {
    Field out = f;
    apply_k2_table_inplace(out, table);
    return out;
}

Field apply_radial(const Field& f, const RadialSymbol& m) {
    return apply_k2_table(f, radial_table(f.grid(), m));
}

void leray_project_inplace(Field& u) {
    require_rank(u, Rank::vector, "leray_project");
    const Grid& g = u.grid();
    const int d = g.dim();
    for (std::size_t i = 1; i < g.size(); ++i) {
        double k2 = g.k2(i);
        cplx w = 0;
        for (int a = 0; a < d; ++a) w += static_cast<double>(g.k(i, a)) * u.at(a, i);
        w /= k2;
        for (int a = 0; a < d; ++a) u.at(a, i) -= static_cast<double>(g.k(i, a)) * w;
    }
}

Field leray_project(const Field& u) {
    Field out = u;
    leray_project_inplace(out);
    return out;
}

double divergence_defect(const Field& u) {
    require_rank(u, Rank::vector, "divergence_defect");
    const Grid& g = u.grid();
    double scale = max_abs_coeff(u);
    if (scale == 0) return 0;
    double m = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        cplx w = 0;
        for (int a = 0; a < g.dim(); ++a) w += g.xi(i, a) * u.at(a, i);
        m = std::max(m, std::abs(w));
    }
    return m / scale;
}

Field divergence(const Field& f) {
    const Grid& g = f.grid();
    const int d = g.dim();
    const cplx I(0, 1);
    if (f.rank() == Rank::vector) {
        Field out(g, Rank::scalar);
        for (std::size_t i = 0; i < g.size(); ++i) {
            cplx s = 0;
            for (int a = 0; a < d; ++a) s += g.xi(i, a) * f.at(a, i);
            out.at(0, i) = I * s;
        }
        return out;
    }
    require_rank(f, Rank::matrix, "divergence");
    Field out(g, Rank::vector);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (int r = 0; r < d; ++r) {
            cplx s = 0;
            for (int a = 0; a < d; ++a) s += g.xi(i, a) * f.at(r * d + a, i);
            out.at(r, i) = I * s;
        }
    return out;
}

Field gradient(const Field& s) {
    require_rank(s, Rank::scalar, "gradient");
    const Grid& g = s.grid();
    Field out(g, Rank::vector);
    const cplx I(0, 1);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (int a = 0; a < g.dim(); ++a) out.at(a, i) = I * g.xi(i, a) * s.at(0, i);
    return out;
}

Field curl(const Field& u) {
    require_rank(u, Rank::vector, "curl");
    const Grid& g = u.grid();
    const cplx I(0, 1);
    if (g.dim() == 2) {
        Field out(g, Rank::scalar);
        for (std::size_t i = 0; i < g.size(); ++i)
            out.at(0, i) = I * (g.xi(i, 0) * u.at(1, i) - g.xi(i, 1) * u.at(0, i));
        return out;
    }
    Field out(g, Rank::vector);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double x0 = g.xi(i, 0), x1 = g.xi(i, 1), x2 = g.xi(i, 2);
        out.at(0, i) = I * (x1 * u.at(2, i) - x2 * u.at(1, i));
        out.at(1, i) = I * (x2 * u.at(0, i) - x0 * u.at(2, i));
        out.at(2, i) = I * (x0 * u.at(1, i) - x1 * u.at(0, i));
    }
    return out;
}

Field laplacian(const Field& f) {
    Field out = f;
    const Grid& g = f.grid();
    for (int c = 0; c < out.ncomp(); ++c) {
        cplx* p = out.comp(c);
        for (std::size_t i = 0; i < g.size(); ++i) p[i] *= -g.xi2(i);
    }
    return out;
}

void dealias_inplace(Field& f) {
    const auto& al = f.grid().tables().aliased;
    const auto& ny = f.grid().tables().nyquist;
    for (int c = 0; c < f.ncomp(); ++c) {
        cplx* p = f.comp(c);
        for (std::size_t i = 0; i < f.size(); ++i)
            if (al[i] || ny[i]) p[i] = 0;
    }
}

Field dealias(const Field& f) {
    Field out = f;
    dealias_inplace(out);
    return out;
}

Field dealias_product(const Field& u, const Field& v) {
    require(u.grid() == v.grid(), "dealias_product: fields on different grids");
    const Grid& g = u.grid();
    Rank r;
    if (u.rank() == Rank::vector && v.rank() == Rank::vector) r = Rank::matrix;
    else if (u.rank() == Rank::scalar && v.rank() == Rank::scalar) r = Rank::scalar;
    else if (u.rank() == Rank::scalar && v.rank() == Rank::vector) r = Rank::vector;
    else if (u.rank() == Rank::vector && v.rank() == Rank::scalar) r = Rank::vector;
    else throw ValidationError("dealias_product: unsupported rank combination");

    Physical pu = to_physical(u);
    Physical pv = (&u == &v) ? pu : to_physical(v);
    const int nu = u.ncomp(), nv = v.ncomp();
    Physical out(component_count(g.dim(), r), rvec(g.size(), 0.0));
    const auto& k = simd::active();
    for (int a = 0; a < nu; ++a)
        for (int b = 0; b < nv; ++b) {
            int c = (r == Rank::matrix) ? a * nv + b : (nu > 1 ? a : b);
            k.accum_product(out[c].data(), pu[a].data(), pv[b].data(), g.size());
        }
    Field f = from_physical(g, r, out);
    dealias_inplace(f);
    return f;
}

Field pressure_from_tensor(const Field& F) {
    require_rank(F, Rank::matrix, "pressure_from_tensor");
    const Grid& g = F.grid();
    const int d = g.dim();
    Field q(g, Rank::scalar);
    for (std::size_t i = 1; i < g.size(); ++i) {
        cplx s = 0;
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                s += static_cast<double>(g.k(i, a) * g.k(i, b)) * F.at(a * d + b, i);
        q.at(0, i) = -s / static_cast<double>(g.k2(i));
    }
    return q;
}

Field pressure_from_velocity(const Field& u, const Field& v) {
    require_rank(u, Rank::vector, "pressure_from_velocity");
    require_rank(v, Rank::vector, "pressure_from_velocity");
    return pressure_from_tensor(dealias_product(u, v));
}

Field transpose(const Field& F) {
    require_rank(F, Rank::matrix, "transpose");
    const int d = F.grid().dim();
    Field out(F.grid(), Rank::matrix);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            std::copy(F.comp(a * d + b), F.comp(a * d + b) + F.size(), out.comp(b * d + a));
    return out;
}

} // namespace clab
