#ifndef NONLOCLAW_GRID_HPP
#define NONLOCLAW_GRID_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "nonloclaw/numeric.hpp"

namespace nonloclaw {

/// Largest supported spatial dimension.
inline constexpr int kMaxDim = 2;

using Index = std::array<int, kMaxDim>;

/// Uniform periodic Cartesian grid in one or two dimensions. Cell i on an axis
/// covers [i*dx, (i+1)*dx); index arithmetic wraps modulo the cell count.
class Grid
{
public:
    Grid(std::vector<int> cells, std::vector<double> spacing);

    /// 1D grid of n cells covering [0, extent).
    static Grid line(int n, double extent);
    /// 2D grid of nx*ny cells covering [0, ex) x [0, ey).
    static Grid plane(int nx, int ny, double ex, double ey);

    int dim() const { return dim_; }
    int cells(int axis) const { return cells_[axis]; }
    double spacing(int axis) const { return spacing_[axis]; }
    double extent(int axis) const { return cells_[axis] * spacing_[axis]; }
    std::size_t size() const { return size_; }
    /// Product of the spacings, the (Δx)^n weight of discrete integrals.
    double cell_volume() const { return volume_; }
    double center(int axis, int i) const { return (i + 0.5) * spacing_[axis]; }

    /// Lexicographic (last axis fastest) linear index of a wrapped multi-index.
    std::size_t linear(const Index& idx) const;
    Index unravel(std::size_t cell) const;

    bool operator==(const Grid& other) const = default;

private:
    int dim_;
    Index cells_{1, 1};
    std::array<double, kMaxDim> spacing_{1.0, 1.0};
    std::size_t size_;
    double volume_;
};

/// Signed lattice offset in cells. Components on unused axes stay zero.
struct ShiftVector {
    Index offsets{0, 0};

    bool is_zero() const;
    ShiftVector operator-() const;
    ShiftVector operator+(const ShiftVector& other) const;
    bool operator==(const ShiftVector& other) const = default;
};

/// Throws InvalidInput when a shift component reaches the axis cell count.
void check_shift(const Grid& grid, const ShiftVector& s);

/// Euclidean length of s measured in physical units.
double physical_norm(const Grid& grid, const ShiftVector& s);

/// Index table t with t[x] = linear index of x + s, wrapped.
std::vector<std::size_t> shift_table(const Grid& grid, const ShiftVector& s);

/// Real values on every cell of a grid. All values are finite.
class GridField
{
public:
    explicit GridField(Grid grid, double fill = 0.0);
    GridField(Grid grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    /// Throws NonFiniteValue naming the first NaN/Inf cell.
    void check_finite(const char* context) const;

    double min() const;
    double max() const;
    /// Σ u · cell volume.
    double mass() const;

    GridField& operator+=(const GridField& other);
    GridField& operator-=(const GridField& other);
    GridField& operator*=(double a);

    bool operator==(const GridField& other) const = default;

private:
    Grid grid_;
    std::vector<double> values_;
};

GridField operator+(GridField a, const GridField& b);
GridField operator-(GridField a, const GridField& b);
GridField operator*(double a, GridField u);

/// result(x) = u(x + s·Δx), periodic. A pure permutation of the values.
GridField shift(const GridField& u, const ShiftVector& s);

/// (shift(u, s) - u) / |s·Δx|.
GridField diff_quotient(const GridField& u, const ShiftVector& s);

/// Discrete L^p norm (Π Δx · Σ |u|^p)^(1/p); p = infinity gives max |u|.
double norm(const GridField& u, double p);
double norm(std::span<const double> u, double cell_volume, double p);

inline double l1_norm(const GridField& u) { return norm(u, 1.0); }
double l1_distance(const GridField& u, const GridField& v);
double linf_norm(const GridField& u);

/// Positive and negative parts, u⁺ = max(u, 0) and u⁻ = max(-u, 0).
GridField positive_part(GridField u);
GridField negative_part(GridField u);

/// Σ_x |u(x + s) - u(x)| · cell volume, the L¹ modulus of continuity at s.
double l1_modulus(const GridField& u, const ShiftVector& s);

/// Cell-volume-weighted inner product Σ u·v·Πdx.
double inner(const GridField& u, const GridField& v);

}  // namespace nonloclaw

#endif
