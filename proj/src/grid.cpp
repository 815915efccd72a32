#include "nonloclaw/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nonloclaw {

namespace {

int wrap(int i, int n)
{
    const int r = i % n;
    return r < 0 ? r + n : r;
}

void require_same_grid(const Grid& a, const Grid& b, const char* op)
{
    if (!(a == b))
        throw InvalidInput(std::string(op) + ": fields live on different grids");
}

}  // namespace

Grid::Grid(std::vector<int> cells, std::vector<double> spacing)
{
    if (cells.empty() || cells.size() > static_cast<std::size_t>(kMaxDim))
        throw InvalidInput("grid dimension must be 1 or 2");
    if (cells.size() != spacing.size())
        throw InvalidInput("grid: cells and spacing must have one entry per axis");
    dim_ = static_cast<int>(cells.size());
    size_ = 1;
    volume_ = 1.0;
    for (int a = 0; a < dim_; ++a) {
        if (cells[a] < 2)
            throw InvalidInput("grid: every axis needs at least 2 cells");
        if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a]))
            throw InvalidInput("grid: spacing must be positive and finite");
        cells_[a] = cells[a];
        spacing_[a] = spacing[a];
        size_ *= static_cast<std::size_t>(cells[a]);
        volume_ *= spacing[a];
    }
}

Grid Grid::line(int n, double extent)
{
    return Grid({n}, {extent / n});
}

Grid Grid::plane(int nx, int ny, double ex, double ey)
{
    return Grid({nx, ny}, {ex / nx, ey / ny});
}

std::size_t Grid::linear(const Index& idx) const
{
    std::size_t k = 0;
    for (int a = 0; a < dim_; ++a)
        k = k * static_cast<std::size_t>(cells_[a]) + static_cast<std::size_t>(wrap(idx[a], cells_[a]));
    return k;
}

Index Grid::unravel(std::size_t cell) const
{
    Index idx{0, 0};
    for (int a = dim_ - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(cell % static_cast<std::size_t>(cells_[a]));
        cell /= static_cast<std::size_t>(cells_[a]);
    }
    return idx;
}

bool ShiftVector::is_zero() const
{
    return std::all_of(offsets.begin(), offsets.end(), [](int o) { return o == 0; });
}

ShiftVector ShiftVector::operator-() const
{
    ShiftVector r;
    for (int a = 0; a < kMaxDim; ++a)
        r.offsets[a] = -offsets[a];
    return r;
}

ShiftVector ShiftVector::operator+(const ShiftVector& other) const
{
    ShiftVector r;
    for (int a = 0; a < kMaxDim; ++a)
        r.offsets[a] = offsets[a] + other.offsets[a];
    return r;
}

void check_shift(const Grid& grid, const ShiftVector& s)
{
    for (int a = 0; a < kMaxDim; ++a) {
        const int n = a < grid.dim() ? grid.cells(a) : 1;
        if (a >= grid.dim() && s.offsets[a] != 0)
            throw InvalidInput("shift has a nonzero component on an unused axis");
        if (a < grid.dim() && std::abs(s.offsets[a]) >= n) {
            std::ostringstream msg;
            msg << "shift component " << s.offsets[a] << " on axis " << a << " reaches the cell count " << n;
            throw InvalidInput(msg.str());
        }
    }
}

double physical_norm(const Grid& grid, const ShiftVector& s)
{
    double sq = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
        const double d = s.offsets[a] * grid.spacing(a);
        sq += d * d;
    }
    return std::sqrt(sq);
}

std::vector<std::size_t> shift_table(const Grid& grid, const ShiftVector& s)
{
    check_shift(grid, s);
    std::vector<std::size_t> table(grid.size());
    for (std::size_t x = 0; x < grid.size(); ++x) {
        Index idx = grid.unravel(x);
        for (int a = 0; a < grid.dim(); ++a)
            idx[a] += s.offsets[a];
        table[x] = grid.linear(idx);
    }
    return table;
}

GridField::GridField(Grid grid, double fill)
    : grid_(std::move(grid)), values_(grid_.size(), fill)
{
    check_finite("GridField");
}

GridField::GridField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values))
{
    if (values_.size() != grid_.size())
        throw InvalidInput("GridField: value count does not match the grid");
    check_finite("GridField");
}

void GridField::check_finite(const char* context) const
{
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            std::ostringstream msg;
            msg << context << ": non-finite value " << values_[i] << " at cell " << i;
            throw NonFiniteValue(msg.str());
        }
    }
}

double GridField::min() const
{
    return *std::min_element(values_.begin(), values_.end());
}

double GridField::max() const
{
    return *std::max_element(values_.begin(), values_.end());
}

double GridField::mass() const
{
    KahanSum s;
    for (double v : values_)
        s += v;
    return s.value() * grid_.cell_volume();
}

GridField& GridField::operator+=(const GridField& other)
{
    require_same_grid(grid_, other.grid_, "operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] += other.values_[i];
    return *this;
}

GridField& GridField::operator-=(const GridField& other)
{
    require_same_grid(grid_, other.grid_, "operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] -= other.values_[i];
    return *this;
}

GridField& GridField::operator*=(double a)
{
    for (double& v : values_)
        v *= a;
    return *this;
}

GridField operator+(GridField a, const GridField& b)
{
    return a += b;
}

GridField operator-(GridField a, const GridField& b)
{
    return a -= b;
}

GridField operator*(double a, GridField u)
{
    return u *= a;
}

GridField shift(const GridField& u, const ShiftVector& s)
{
    const auto table = shift_table(u.grid(), s);
    GridField out(u.grid());
    for (std::size_t x = 0; x < u.size(); ++x)
        out[x] = u[table[x]];
    return out;
}

GridField diff_quotient(const GridField& u, const ShiftVector& s)
{
    if (s.is_zero())
        throw InvalidInput("diff_quotient: zero shift has zero length");
    const double len = physical_norm(u.grid(), s);
    GridField out = shift(u, s);
    for (std::size_t x = 0; x < u.size(); ++x)
        out[x] = (out[x] - u[x]) / len;
    return out;
}

double norm(std::span<const double> u, double cell_volume, double p)
{
    if (std::isnan(p) || p < 1.0)
        throw InvalidInput("norm: exponent p must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : u)
            m = std::max(m, std::abs(v));
        return m;
    }
    KahanSum s;
    if (p == 1.0) {
        for (double v : u)
            s += std::abs(v);
        return s.value() * cell_volume;
    }
    for (double v : u)
        s += std::pow(std::abs(v), p);
    return std::pow(s.value() * cell_volume, 1.0 / p);
}

double norm(const GridField& u, double p)
{
    return norm(u.values(), u.grid().cell_volume(), p);
}

double l1_distance(const GridField& u, const GridField& v)
{
    require_same_grid(u.grid(), v.grid(), "l1_distance");
    KahanSum s;
    for (std::size_t i = 0; i < u.size(); ++i)
        s += std::abs(u[i] - v[i]);
    return s.value() * u.grid().cell_volume();
}

double linf_norm(const GridField& u)
{
    return norm(u, std::numeric_limits<double>::infinity());
}

GridField positive_part(GridField u)
{
    for (double& v : u.values())
        v = std::max(v, 0.0);
    return u;
}

GridField negative_part(GridField u)
{
    for (double& v : u.values())
        v = std::max(-v, 0.0);
    return u;
}

double l1_modulus(const GridField& u, const ShiftVector& s)
{
    const auto table = shift_table(u.grid(), s);
    KahanSum acc;
    for (std::size_t x = 0; x < u.size(); ++x)
        acc += std::abs(u[table[x]] - u[x]);
    return acc.value() * u.grid().cell_volume();
}

double inner(const GridField& u, const GridField& v)
{
    require_same_grid(u.grid(), v.grid(), "inner");
    KahanSum s;
    for (std::size_t i = 0; i < u.size(); ++i)
        s += u[i] * v[i];
    return s.value() * u.grid().cell_volume();
}

}  // namespace nonloclaw
