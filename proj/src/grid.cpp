#include "clab/grid.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "clab/error.hpp"

namespace clab {
namespace {

std::shared_ptr<const GridTables> build_tables(int dim, int n) {
    auto t = std::make_shared<GridTables>();
    t->dim = dim;
    t->n = n;
    std::size_t size = 1;
    for (int a = 0; a < dim; ++a) size *= static_cast<std::size_t>(n);
    t->size = size;
    t->k.assign(dim, std::vector<std::int16_t>(size));
    t->k2.resize(size);
    t->neg.resize(size);
    t->nyquist.resize(size);
    t->aliased.resize(size);
    const int half = n / 2;
    for (std::size_t f = 0; f < size; ++f) {
        std::size_t rem = f, negf = 0, stride = size;
        std::int32_t k2 = 0;
        bool nyq = false, al = false;
        for (int a = 0; a < dim; ++a) {
            stride /= n;
            int i = static_cast<int>(rem / stride);
            rem %= stride;
            int k = i < half ? i : i - n;
            t->k[a][f] = static_cast<std::int16_t>(k);
            k2 += k * k;
            nyq = nyq || i == half;
            al = al || 3 * std::abs(k) >= n;
            negf += static_cast<std::size_t>((n - i) % n) * stride;
        }
        t->k2[f] = k2;
        t->neg[f] = static_cast<std::uint32_t>(negf);
        t->nyquist[f] = nyq;
        t->aliased[f] = al;
        if (!nyq && k2 > t->k2_max) t->k2_max = k2;
    }
    return t;
}

std::shared_ptr<const GridTables> tables_for(int dim, int n) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::weak_ptr<const GridTables>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{dim, n}];
    if (auto sp = slot.lock()) return sp;
    auto sp = build_tables(dim, n);
    slot = sp;
    return sp;
}

} // namespace

Grid make_grid(int dim, int n, double L) {
    require(dim == 2 || dim == 3, "grid dimension must be 2 or 3");
    require(n >= 8 && n % 2 == 0, "points per axis must be even and at least 8");
    require(std::isfinite(L) && L > 0, "box length must be positive");
    require(n <= 1024, "points per axis above 1024 not supported");
    Grid g;
    g.dim_ = dim;
    g.n_ = n;
    g.L_ = L;
    g.dk_ = 2 * std::numbers::pi / L;
    g.tables_ = tables_for(dim, n);
    g.size_ = g.tables_->size;
    return g;
}

Grid with_box(const Grid& g, double L) { return make_grid(g.dim(), g.n(), L); }

double Grid::cell_volume() const { return std::pow(L_ / n_, dim_); }
double Grid::volume() const { return std::pow(L_, dim_); }

double Grid::xi_max() const { return dk_ * std::sqrt(static_cast<double>(tables_->k2_max)); }

std::size_t Grid::index_of(const std::array<int, 3>& kv) const {
    std::size_t f = 0;
    for (int a = 0; a < dim_; ++a) {
        int k = kv[a];
        require(k >= -n_ / 2 && k < n_ / 2, "wavenumber outside grid");
        f = f * n_ + static_cast<std::size_t>((k + n_) % n_);
    }
    return f;
}

} // namespace clab
