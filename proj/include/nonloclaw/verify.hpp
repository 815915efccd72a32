#ifndef NONLOCLAW_VERIFY_HPP
#define NONLOCLAW_VERIFY_HPP

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nonloclaw/semigroup.hpp"

namespace nonloclaw {

/// f(x, t) ≥ 0; x holds one coordinate per grid axis.
using SpaceTimeFunction = std::function<double(std::span<const double>, double)>;

/// Π_a b((x_a - c_a)/w_a) · b((t - t_c)/t_w) with b(s) = (1 - s²)³ on |s| < 1,
/// spatial offsets taken periodically.
struct TensorBump {
    std::vector<double> center;
    std::vector<double> width;
    double t_center = 0.0;
    double t_width = 0.0;

    double operator()(std::span<const double> x, double t, std::span<const double> extent) const;
};

struct TestFunctionFamily {
    std::string kind = "tensor_bump";
    std::vector<TensorBump> members;
    std::vector<double> extent;

    /// n_space centers per axis times n_time centers. Spatial radius is
    /// extent/n_space; temporal supports stay strictly inside (0, T).
    static TestFunctionFamily tensor_grid(const Grid& grid, double T, int n_space, int n_time);

    /// Throws InvalidInput unless every member vanishes near t = 0 and t = T and
    /// no spatial support wraps onto itself.
    void validate(double T) const;

    SpaceTimeFunction function(std::size_t k) const;
};

/// Discrete entropy residual
///
///   E(f, c) = Σ_m Σ_x Δx^n [ |u^m - c| (f^{m+1} - f^m)
///             + Δt_m Σ_terms (w/|β|) (τf^m sign₀(τu^m - c) - f^m sign₀(u^m - c)) (φ(u^m, τu^m) - φ(c, c)) ]
///
/// with f^m = f(·, t_m), the time sum running over every stored step and
/// Δt_m = t_m - t_{m-1}. The trajectory must store every step. Throws
/// InvalidInput when f is negative somewhere on the lattice.
double entropy_residual(const Trajectory& traj, const OperatorAssembly& op, const SpaceTimeFunction& f, double c);

struct EntropyEntry {
    std::size_t member = 0;
    double c = 0.0;
    bool sentinel = false;
    double residual = 0.0;
};

struct EntropyReport {
    std::vector<EntropyEntry> entries;
    double min_residual = 0.0;
    /// Entry holding min_residual.
    std::size_t worst = 0;
    /// Largest |E| over the out-of-range constants, where E must vanish.
    double sentinel_max_abs = 0.0;
    double tolerance = 0.0;
    double residual_budget = 0.0;
    bool passed = true;
};

struct EntropyAuditOptions {
    /// ≤ 0 selects 1e-8·|u0|₁·T.
    double tolerance = 0.0;
};

/// E(f, c) for every family member and c in {c_samples - 2 quantiles of the
/// trajectory values} ∪ {±(|u|_∞ + 1)}. Passes iff every residual is
/// ≥ -tolerance and the sentinel residuals are within tolerance of zero.
EntropyReport entropy_audit(const Trajectory& traj, const OperatorAssembly& op, const TestFunctionFamily& family,
                            int c_samples = 9, const EntropyAuditOptions& opts = {});

/// CSV "member,t_center,t_width,x_center,x_width[,y_center,y_width],c,sentinel,residual"
/// followed by a "# summary" line.
void write_entropy_csv(std::ostream& out, const EntropyReport& report, const TestFunctionFamily& family);

/// The stationary profile u = -sign(x - L/2) on a 1D periodic grid held
/// constant in time: a compressive jump at L/2 and an expansion jump at the
/// seam, so no monotone scheme produces it.
Trajectory stationary_trajectory(const GridField& u, double T, double dt);
GridField sign_profile(const Grid& grid);

struct TheoremCase {
    GridField u0;
    GridField v0;
    double T = 0.0;
    double eps = 0.0;
};

struct TheoremSuiteOptions {
    double tol = 1e-8;
    ResolventOptions solve = ResolventSuiteOptions::tight_solve();
    /// Also checks S(t)S(s) = S(t+s) and shift equivariance of the evolution.
    bool semigroup_checks = true;
};

/// Evolves both data of each case implicitly and checks along every snapshot:
///  (i)   |u(t)|_p ≤ |u0|₁^(1/p) |u0|_∞^(1-1/p), p ∈ {1, 2, ∞}
///  (ii)  -|u0⁻|_∞ ≤ u(t) ≤ |u0⁺|_∞
///  (iii) |(u(t) - v(t))⁺|₁ ≤ |(u0 - v0)⁺|₁ (and the L¹ contraction)
///  (iv)  Σ|u(t)(x+y) - u(t)(x)| ≤ Σ|u0(x+y) - u0(x)| for every lattice y
///  (v)   Σ u(t) = Σ u0
/// Each bound is allowed tol plus the trajectories' residual budget.
PropertyReport theorem_suite(const OperatorAssembly& op, const std::vector<TheoremCase>& cases,
                             const TheoremSuiteOptions& opts = {});

/// One line per check: "PASS|FAIL name worst_excess tolerance".
void write_property_report(std::ostream& out, const PropertyReport& report);

}  // namespace nonloclaw

#endif
