#ifndef NONLOCLAW_LOCAL_LIMIT_HPP
#define NONLOCLAW_LOCAL_LIMIT_HPP

#include <functional>
#include <string>
#include <vector>

#include "nonloclaw/fluxes.hpp"
#include "nonloclaw/grid.hpp"
#include "nonloclaw/kernels.hpp"

namespace nonloclaw {

/// Closed-form entropy solution of a 1D periodic local conservation law.
struct ReferenceSolution {
    std::string name;
    /// u(x, t) for x anywhere on the real line (periodic in the extent).
    std::function<double(double, double)> exact;
    /// Largest characteristic speed, for the wrap-time guard.
    double max_speed = 0.0;
    double extent = 1.0;
    /// Latest time at which `exact` is valid (waves still separate).
    double valid_until = 0.0;
};

/// Burgers with u_left on [0, jump·L) and u_right on [jump·L, L): a Riemann
/// problem at the jump and the mirrored one at the periodic seam, each a
/// shock (Rankine-Hugoniot speed (l+r)/2) or a rarefaction fan x/t.
ReferenceSolution burgers_riemann(double u_left, double u_right, double jump = 0.5, double extent = 1.0);

/// u(x, t) = u0(x - speed·t), periodic.
ReferenceSolution linear_advection(double speed, std::function<double(double)> u0, double extent = 1.0);

/// Cell averages of ref.exact(·, t) on a 1D grid by midpoint subsampling.
GridField cell_averages(const ReferenceSolution& ref, const Grid& grid, double t, int subsamples = 64);

/// The classical explicit finite-volume scheme
///   u_i ← u_i - dt/Δx [φ(u_i, u_{i+1}) - φ(u_{i-1}, u_i)]
/// on a 1D periodic grid, dt = cfl_fraction·Δx/(K1+K2) (last step short).
GridField local_upwind_solve(const FluxPair& flux, const GridField& u0, double T, double cfl_fraction = 0.9);

struct LocalLimitOptions {
    Symmetry symmetry = Symmetry::one_sided;
    double cfl_fraction = 0.9;
    int subsamples = 64;
};

struct LocalLimitRow {
    double delta = 0.0;
    int delta_cells = 0;
    double error = 0.0;
    /// log2(e_prev/e)/log2(δ_prev/δ); NaN in the first row.
    double order = 0.0;
};

struct LocalLimitTable {
    std::string oracle;
    std::vector<LocalLimitRow> rows;
    /// Local scheme on the grid whose Δx equals the smallest δ.
    double baseline_error = 0.0;
    int baseline_cells = 0;
    /// Local scheme on the study grid itself.
    double same_grid_baseline_error = 0.0;

    bool errors_decrease() const;
};

/// For each δ (an integer multiple of Δx) runs the explicit nonlocal scheme
/// with the given flux and kernel profile to time T and records the L¹
/// distance to the cell averages of the reference. Requires a 1D grid and
/// T < extent/(2·max speed).
LocalLimitTable local_limit_study(const FluxPair& flux, const std::string& profile, const ReferenceSolution& ref,
                                  double T, const std::vector<double>& deltas, const Grid& grid,
                                  const LocalLimitOptions& opts = {});

}  // namespace nonloclaw

#endif
