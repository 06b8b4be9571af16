#include "clab/heat.hpp"

#include <cmath>

#include "clab/error.hpp"
#include "clab/simd.hpp"
#include "clab/spectral_ops.hpp"

namespace clab {

Field heat_evolve(const Field& f, double t) {
    require(std::isfinite(t) && t >= 0, "heat_evolve: t must be non-negative");
    if (t == 0) return f;
    return apply_radial(f, [t](double xi) { return std::exp(-xi * xi * t); });
}

Field pdiv(const Field& F) {
    Field g = divergence(F);
    leray_project_inplace(g);
    return g;
}

Field oseen_apply(const Field& F, double t) { return heat_evolve(pdiv(F), t); }

StepTables step_tables(const Grid& g, double h) {
    require(h > 0, "step length must be positive");
    StepTables st;
    st.h = h;
    const std::size_t n = k2_table_size(g);
    st.e.resize(n);
    st.ca.resize(n);
    st.cb.resize(n);
    const double dk2 = g.dk() * g.dk();
    for (std::size_t q = 0; q < n; ++q) {
        double z = dk2 * q * h, psi1, psi2;
        if (z < 0.5) {
            // psi_m(z) = sum_n (-z)^n / (n + m)!
            double t1 = 1.0, t2 = 0.5;
            psi1 = 0;
            psi2 = 0;
            for (int k = 0; k < 30; ++k) {
                psi1 += t1;
                psi2 += t2;
                t1 *= -z / (k + 2);
                t2 *= -z / (k + 3);
            }
        } else {
            double em1 = std::expm1(-z);
            psi1 = -em1 / z;
            psi2 = (z + em1) / (z * z);
        }
        st.e[q] = std::exp(-z);
        st.ca[q] = h * (psi1 - psi2);
        st.cb[q] = h * psi2;
    }
    return st;
}

void exp_step(Field& D, const Field& G0, const Field& G1, const StepTables& st) {
    check_same_grid(D, G0);
    check_same_grid(D, G1);
    const Grid& g = D.grid();
    const auto& k = simd::active();
    for (int c = 0; c < D.ncomp(); ++c)
        k.exp_step(D.comp(c), G0.comp(c), G1.comp(c), g.tables().k2.data(), st.e.data(),
                   st.ca.data(), st.cb.data(), g.size());
}

Trajectory duhamel_march(const Trajectory& G) {
    require(!G.empty(), "duhamel_march: no samples");
    const Grid& g = G.grid();
    Trajectory out(g);
    Field D(g, G.field(0).rank());
    double t0 = G.time(0);
    if (t0 > 0) {
        // G held at its first value on [0, t0]: D = t0 psi1 G0 = ca + cb
        StepTables st = step_tables(g, t0);
        exp_step(D, G.field(0), G.field(0), st);
    }
    out.push(t0, D);
    for (std::size_t m = 1; m < G.size(); ++m) {
        StepTables st = step_tables(g, G.time(m) - G.time(m - 1));
        exp_step(D, G.field(m - 1), G.field(m), st);
        out.push(G.time(m), D);
    }
    return out;
}

Field Source::derivative(double t, int m) const {
    if (m == 0) return eval(t);
    throw ValidationError("this source has no time derivatives");
}

SampledSource::SampledSource(Trajectory F) : F_(std::move(F)) {
    require(!F_.empty(), "sampled source needs samples");
}

Field SampledSource::eval(double t) const {
    const auto& ts = F_.times();
    if (t <= ts.front()) return F_.field(0);
    require(t <= ts.back(), "sampled source does not cover the requested time");
    std::size_t i = 1;
    while (ts[i] < t) ++i;
    double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
    Field f = F_.field(i - 1);
    f *= 1 - w;
    f.axpy(w, F_.field(i));
    return f;
}

Field PowerLawSource::eval(double t) const { return std::pow(t, a_) * F0_; }

Field PowerLawSource::derivative(double t, int m) const {
    double c = 1;
    for (int i = 0; i < m; ++i) c *= a_ - i;
    return c * std::pow(t, a_ - m) * F0_;
}

Field HeatProductSource::eval(double t) const {
    Field w = heat_evolve(w_, t);
    return dealias_product(w, w);
}

Field HeatProductSource::derivative(double t, int m) const {
    // d_t^m (w (x) w) = sum_i C(m, i) Delta^i w (x) Delta^{m-i} w
    Field w = heat_evolve(w_, t);
    std::vector<Field> lap{w};
    for (int i = 1; i <= m; ++i) lap.push_back(laplacian(lap.back()));
    Field out(w.grid(), Rank::matrix);
    double binom = 1;
    for (int i = 0; i <= m; ++i) {
        out.axpy(binom, dealias_product(lap[i], lap[m - i]));
        binom = binom * (m - i) / (i + 1);
    }
    return out;
}

std::vector<double> duhamel_nodes(double t, int J, int uniform, int substeps) {
    require(t > 0 && J >= 3 && uniform >= 1 && substeps >= 1, "bad Duhamel node parameters");
    std::vector<double> coarse{0.0};
    for (int m = J; m >= 4; --m) coarse.push_back(std::ldexp(t, -m));
    for (int i = 0; i <= uniform; ++i) coarse.push_back(t / 8 + (t - t / 8) * i / uniform);
    std::vector<double> nodes;
    for (std::size_t i = 1; i < coarse.size(); ++i)
        for (int s = 1; s <= substeps; ++s)
            nodes.push_back(coarse[i - 1] + (coarse[i] - coarse[i - 1]) * s / substeps);
    nodes.back() = t;
    return nodes;
}

namespace {

Field march_to_end(const Trajectory& G) { return duhamel_march(G).fields().back(); }

Trajectory every_other(const Trajectory& G) {
    Trajectory h(G.grid());
    for (std::size_t i = 0; i < G.size(); i += 2) h.push(G.time(i), G.field(i));
    if (h.t_end() != G.t_end()) h.push(G.t_end(), G.fields().back());
    return h;
}

DuhamelResult finish(const Trajectory& G, const QuadratureScheme& scheme) {
    DuhamelResult r;
    r.value = march_to_end(G);
    if (scheme.error_estimate && G.size() >= 3)
        r.error_estimate = l2_norm(r.value - march_to_end(every_other(G))) / 3.0;
    return r;
}

} // namespace

DuhamelResult duhamel_integral(const Trajectory& F, double t, const QuadratureScheme& scheme) {
    require(!F.empty(), "duhamel_integral: empty source");
    require(scheme.substeps >= 1, "substeps must be at least 1");
    require(t > 0, "duhamel_integral: t must be positive");
    require(F.time(0) == 0 && F.t_end() >= t, "source trajectory does not cover [0, t]");
    SampledSource src(F);
    Trajectory G(F.grid());
    for (std::size_t i = 0; i < F.size() && F.time(i) <= t; ++i) {
        if (i > 0)
            for (int s = 1; s < scheme.substeps; ++s) {
                double ts = F.time(i - 1) + (F.time(i) - F.time(i - 1)) * s / scheme.substeps;
                G.push(ts, pdiv(src.eval(ts)));
            }
        G.push(F.time(i), pdiv(F.field(i)));
    }
    if (G.t_end() < t) G.push(t, pdiv(src.eval(t)));
    return finish(G, scheme);
}

DuhamelResult duhamel_integral(const Source& F, double t, const QuadratureScheme& scheme, int J) {
    Trajectory G(F.grid());
    for (double s : duhamel_nodes(t, J, 8, scheme.substeps)) G.push(s, pdiv(F.eval(s)));
    return finish(G, scheme);
}

} // namespace clab
