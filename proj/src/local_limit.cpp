#include "nonloclaw/local_limit.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>
#include <sstream>

#include "nonloclaw/nonlocal_operator.hpp"
#include "nonloclaw/semigroup.hpp"

namespace nonloclaw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Wave {
    double lo, hi;  // characteristic speeds bounding the fan
};

Wave burgers_wave(double l, double r)
{
    if (l > r)
        return {0.5 * (l + r), 0.5 * (l + r)};
    return {l, r};
}

double burgers_riemann_value(double l, double r, double d, double t)
{
    if (t <= 0.0)
        return d < 0.0 ? l : r;
    const double xi = d / t;
    if (l > r)
        return xi < 0.5 * (l + r) ? l : r;
    return std::clamp(xi, l, r);
}

double wrap(double x, double extent)
{
    double y = std::fmod(x, extent);
    return y < 0.0 ? y + extent : y;
}

void require_line(const Grid& grid, const char* what)
{
    if (grid.dim() != 1)
        throw InvalidInput(std::string(what) + " needs a 1D grid");
}

}  // namespace

ReferenceSolution burgers_riemann(double u_left, double u_right, double jump, double extent)
{
    if (!(extent > 0.0) || !(jump > 0.0 && jump < 1.0))
        throw InvalidInput("burgers_riemann: jump must lie strictly inside the period");
    const double xj = jump * extent;
    const Wave seam = burgers_wave(u_right, u_left);
    const Wave mid = burgers_wave(u_left, u_right);
    ReferenceSolution ref;
    ref.name = "burgers_riemann";
    ref.extent = extent;
    ref.max_speed = std::max(std::abs(u_left), std::abs(u_right));
    ref.valid_until = kInf;
    if (seam.hi > mid.lo)
        ref.valid_until = std::min(ref.valid_until, xj / (seam.hi - mid.lo));
    if (mid.hi > seam.lo)
        ref.valid_until = std::min(ref.valid_until, (extent - xj) / (mid.hi - seam.lo));
    ref.exact = [=](double x, double t) {
        // Cut the circle between the two fans; each arc sees a single Riemann problem.
        const double p = 0.5 * (seam.hi * t + xj + mid.lo * t);
        const double q = 0.5 * (xj + mid.hi * t + extent + seam.lo * t);
        double y = wrap(x, extent);
        if (y < p)
            y += extent;
        if (y < q)
            return burgers_riemann_value(u_left, u_right, y - xj, t);
        return burgers_riemann_value(u_right, u_left, y - extent, t);
    };
    return ref;
}

ReferenceSolution linear_advection(double speed, std::function<double(double)> u0, double extent)
{
    if (!(extent > 0.0))
        throw InvalidInput("linear_advection: extent must be positive");
    ReferenceSolution ref;
    ref.name = "linear_advection";
    ref.extent = extent;
    ref.max_speed = std::abs(speed);
    ref.valid_until = kInf;
    ref.exact = [=](double x, double t) { return u0(wrap(x - speed * t, extent)); };
    return ref;
}

GridField cell_averages(const ReferenceSolution& ref, const Grid& grid, double t, int subsamples)
{
    require_line(grid, "cell_averages");
    if (subsamples < 1)
        throw InvalidInput("cell_averages needs at least one subsample");
    if (t > ref.valid_until)
        throw InvalidInput("reference solution " + ref.name + " is not valid at this time (waves interact)");
    GridField u(grid);
    const double dx = grid.spacing(0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        KahanSum s;
        for (int k = 0; k < subsamples; ++k)
            s += ref.exact((static_cast<double>(i) + (k + 0.5) / subsamples) * dx, t);
        u[i] = s.value() / subsamples;
    }
    return u;
}

GridField local_upwind_solve(const FluxPair& flux, const GridField& u0, double T, double cfl_fraction)
{
    const Grid& grid = u0.grid();
    require_line(grid, "local_upwind_solve");
    const double k = flux.k1 + flux.k2;
    if (!(T > 0.0) || !(cfl_fraction > 0.0 && cfl_fraction <= 1.0))
        throw InvalidInput("local_upwind_solve: need T > 0 and a CFL fraction in (0, 1]");
    const double dx = grid.spacing(0);
    const double dt = k > 0.0 ? cfl_fraction * dx / k : T;
    const int steps = step_count(T, dt);
    const std::size_t n = u0.size();
    std::vector<double> u(u0.values().begin(), u0.values().end()), face(n);
    for (int m = 1; m <= steps; ++m) {
        const double r = step_size(m, T, dt) / dx;
        for (std::size_t i = 0; i < n; ++i)
            face[i] = flux.phi(u[i], u[(i + 1) % n]);
        for (std::size_t i = 0; i < n; ++i)
            u[i] -= r * (face[i] - face[(i + n - 1) % n]);
    }
    GridField out(grid, std::move(u));
    out.check_finite("local_upwind_solve");
    return out;
}

bool LocalLimitTable::errors_decrease() const
{
    for (std::size_t k = 1; k < rows.size(); ++k)
        if (!(rows[k].error < rows[k - 1].error))
            return false;
    return !rows.empty();
}

LocalLimitTable local_limit_study(const FluxPair& flux, const std::string& profile, const ReferenceSolution& ref,
                                  double T, const std::vector<double>& deltas, const Grid& grid,
                                  const LocalLimitOptions& opts)
{
    require_line(grid, "local_limit_study");
    if (deltas.empty())
        throw InvalidInput("local_limit_study needs at least one horizon");
    if (!(T > 0.0))
        throw InvalidInput("local_limit_study: T must be positive");
    if (std::abs(ref.extent - grid.extent(0)) > 1e-12 * ref.extent)
        throw InvalidInput("local_limit_study: reference period differs from the grid extent");
    if (ref.max_speed > 0.0 && !(T < grid.extent(0) / (2.0 * ref.max_speed))) {
        std::ostringstream msg;
        msg << "local_limit_study: T = " << T << " is not below the wrap time extent/(2 max speed) = "
            << grid.extent(0) / (2.0 * ref.max_speed);
        throw InvalidInput(msg.str());
    }
    const GridField u0 = cell_averages(ref, grid, 0.0, opts.subsamples);
    const GridField exact = cell_averages(ref, grid, T, opts.subsamples);

    LocalLimitTable table;
    table.oracle = ref.name;
    EvolveOptions ev;
    ev.snapshot_every = INT_MAX;
    for (double delta : deltas) {
        const auto op = OperatorAssembly::from_kernel(grid, make_kernel(profile, opts.symmetry, {delta}, {{0}}), {flux});
        const Trajectory traj = evolve_explicit(op, u0, T, opts.cfl_fraction / op.cfl_constant(), ev);
        LocalLimitRow row;
        row.delta = delta;
        row.delta_cells = static_cast<int>(std::lround(delta / grid.spacing(0)));
        row.error = l1_distance(traj.final_state(), exact);
        row.order = std::numeric_limits<double>::quiet_NaN();
        if (!table.rows.empty()) {
            const LocalLimitRow& prev = table.rows.back();
            row.order = std::log(prev.error / row.error) / std::log(prev.delta / delta);
        }
        table.rows.push_back(row);
    }

    const double finest = *std::min_element(deltas.begin(), deltas.end());
    table.baseline_cells = static_cast<int>(std::lround(grid.extent(0) / finest));
    const Grid coarse = Grid::line(table.baseline_cells, grid.extent(0));
    table.baseline_error = l1_distance(local_upwind_solve(flux, cell_averages(ref, coarse, 0.0, opts.subsamples), T,
                                                          opts.cfl_fraction),
                                       cell_averages(ref, coarse, T, opts.subsamples));
    table.same_grid_baseline_error = l1_distance(local_upwind_solve(flux, u0, T, opts.cfl_fraction), exact);
    return table;
}

}  // namespace nonloclaw
