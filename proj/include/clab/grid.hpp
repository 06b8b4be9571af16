#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace clab {

// Shared per-(dim, N) lookup tables, built once.
struct GridTables {
    int dim = 0;
    int n = 0;
    std::size_t size = 0;
    // integer wavenumber per axis, per flat index
    std::vector<std::vector<std::int16_t>> k;
    // integer |k|^2 per flat index
    std::vector<std::int32_t> k2;
    // flat index of -k
    std::vector<std::uint32_t> neg;
    // true where any axis sits on the Nyquist index N/2
    std::vector<std::uint8_t> nyquist;
    // true where some |k_axis| > N/3 (removed by the 2/3 rule)
    std::vector<std::uint8_t> aliased;
    std::int32_t k2_max = 0;
};

// Isotropic periodic grid on [0, L)^dim.
class Grid {
public:
    Grid() = default;

    int dim() const { return dim_; }
    int n() const { return n_; }
    double box() const { return L_; }
    std::size_t size() const { return size_; }
    // 2 pi / L
    double dk() const { return dk_; }
    // cell volume (L/N)^dim
    double cell_volume() const;
    double volume() const;

    const GridTables& tables() const { return *tables_; }
    int k(std::size_t flat, int axis) const { return tables_->k[axis][flat]; }
    double xi(std::size_t flat, int axis) const { return dk_ * tables_->k[axis][flat]; }
    std::int32_t k2(std::size_t flat) const { return tables_->k2[flat]; }
    double xi2(std::size_t flat) const { return dk_ * dk_ * tables_->k2[flat]; }
    std::size_t neg(std::size_t flat) const { return tables_->neg[flat]; }
    bool nyquist(std::size_t flat) const { return tables_->nyquist[flat] != 0; }

    // flat index of an integer wavevector; axes beyond dim are ignored
    std::size_t index_of(const std::array<int, 3>& kv) const;
    // physical coordinate of grid point i along any axis
    double x(int i) const { return L_ * i / n_; }

    // smallest and largest nonzero |xi| among retained (non-Nyquist) modes
    double xi_min() const { return dk_; }
    double xi_max() const;

    bool operator==(const Grid& o) const { return dim_ == o.dim_ && n_ == o.n_ && L_ == o.L_; }
    bool operator!=(const Grid& o) const { return !(*this == o); }

    friend Grid make_grid(int dim, int n, double L);

private:
    int dim_ = 0, n_ = 0;
    double L_ = 0, dk_ = 0;
    std::size_t size_ = 0;
    std::shared_ptr<const GridTables> tables_;
};

Grid make_grid(int dim, int n, double L);

// Same index space, different box length.
Grid with_box(const Grid& g, double L);

} // namespace clab
