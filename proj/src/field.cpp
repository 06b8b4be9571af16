#include "clab/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "clab/error.hpp"

namespace clab {

int component_count(int dim, Rank r) {
    switch (r) {
    case Rank::scalar: return 1;
    case Rank::vector: return dim;
    case Rank::matrix: return dim * dim;
    }
    return 0;
}

const char* rank_name(Rank r) {
    switch (r) {
    case Rank::scalar: return "scalar";
    case Rank::vector: return "vector";
    case Rank::matrix: return "matrix";
    }
    return "?";
}

Rank rank_from_name(const char* s) {
    if (std::strcmp(s, "scalar") == 0) return Rank::scalar;
    if (std::strcmp(s, "vector") == 0) return Rank::vector;
    if (std::strcmp(s, "matrix") == 0) return Rank::matrix;
    throw ValidationError(std::string("unknown rank: ") + s);
}

Field::Field(const Grid& g, Rank r)
    : grid_(g), rank_(r), ncomp_(component_count(g.dim(), r)), data_(ncomp_ * g.size()) {}

void check_same_grid(const Field& a, const Field& b) {
    require(a.grid() == b.grid(), "fields live on different grids");
    require(a.ncomp() == b.ncomp(), "fields have different component counts");
}

Field& Field::operator+=(const Field& o) {
    check_same_grid(*this, o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    check_same_grid(*this, o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

Field& Field::operator*=(double a) {
    for (auto& c : data_) c *= a;
    return *this;
}

Field& Field::axpy(double a, const Field& o) {
    check_same_grid(*this, o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * o.data_[i];
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

double l2_norm_sq(const Field& f) {
    double acc = 0;
    for (const auto& c : f.data()) acc += std::norm(c);
    return acc * f.grid().volume();
}

double l2_norm(const Field& f) { return std::sqrt(l2_norm_sq(f)); }

double l2_inner(const Field& a, const Field& b) {
    check_same_grid(a, b);
    double acc = 0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        acc += (std::conj(a.data()[i]) * b.data()[i]).real();
    return acc * a.grid().volume();
}

double grad_l2_norm_sq(const Field& f) {
    const Grid& g = f.grid();
    double acc = 0;
    for (int c = 0; c < f.ncomp(); ++c) {
        const cplx* p = f.comp(c);
        for (std::size_t i = 0; i < g.size(); ++i) acc += g.k2(i) * std::norm(p[i]);
    }
    return acc * g.dk() * g.dk() * g.volume();
}

double max_abs_coeff(const Field& f) {
    double m = 0;
    for (const auto& c : f.data()) m = std::max(m, std::abs(c));
    return m;
}

double hermitian_defect(const Field& f) {
    double scale = max_abs_coeff(f);
    if (scale == 0) return 0;
    const Grid& g = f.grid();
    double m = 0;
    for (int c = 0; c < f.ncomp(); ++c) {
        const cplx* p = f.comp(c);
        for (std::size_t i = 0; i < g.size(); ++i)
            m = std::max(m, std::abs(p[g.neg(i)] - std::conj(p[i])));
    }
    return m / scale;
}

void make_hermitian(Field& f) {
    const Grid& g = f.grid();
    for (int c = 0; c < f.ncomp(); ++c) {
        cplx* p = f.comp(c);
        for (std::size_t i = 0; i < g.size(); ++i) {
            std::size_t j = g.neg(i);
            if (j < i) continue;
            cplx a = 0.5 * (p[i] + std::conj(p[j]));
            p[i] = a;
            p[j] = std::conj(a);
        }
    }
    zero_nyquist(f);
}

void zero_nyquist(Field& f) {
    const auto& ny = f.grid().tables().nyquist;
    for (int c = 0; c < f.ncomp(); ++c) {
        cplx* p = f.comp(c);
        for (std::size_t i = 0; i < f.size(); ++i)
            if (ny[i]) p[i] = 0;
    }
}

void zero_mean(Field& f) {
    for (int c = 0; c < f.ncomp(); ++c) f.comp(c)[0] = 0;
}

double rel_diff(const Field& a, const Field& b) {
    check_same_grid(a, b);
    double d = 0, s = 0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
        s = std::max(s, std::max(std::abs(a.data()[i]), std::abs(b.data()[i])));
    }
    return s == 0 ? 0 : d / s;
}

Field component(const Field& f, int c) {
    require(c >= 0 && c < f.ncomp(), "component index out of range");
    Field out(f.grid(), Rank::scalar);
    std::copy(f.comp(c), f.comp(c) + f.size(), out.comp(0));
    return out;
}

} // namespace clab
