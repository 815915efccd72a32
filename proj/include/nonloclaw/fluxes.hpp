#ifndef NONLOCLAW_FLUXES_HPP
#define NONLOCLAW_FLUXES_HPP

#include <functional>
#include <string>

namespace nonloclaw {

/// Closed interval [lo, hi] on which a flux's monotonicity and Lipschitz data
/// are certified.
struct Range {
    double lo = -1.0;
    double hi = 1.0;

    bool contains(double a) const { return lo <= a && a <= hi; }
    double width() const { return hi - lo; }
};

/// Two-point flux φ(a, b), nondecreasing in a and nonincreasing in b, with its
/// consistent local flux ψ(a) = φ(a, a).
struct FluxPair {
    std::string name;
    std::function<double(double, double)> phi;
    std::function<double(double)> psi;
    /// Partial derivatives of φ; used by the scalar Newton solves. May be empty.
    std::function<double(double, double)> dphi_da;
    std::function<double(double, double)> dphi_db;
    /// Lipschitz constants of φ in its first and second argument on `range`.
    double k1 = 0.0;
    double k2 = 0.0;
    Range range;
};

/// [-|u⁻|∞, |u⁺|∞] padded by 10% of its width (or of max(1, |bound|) when
/// the interval is a single point).
Range certified_range(double min_value, double max_value);

/// φ(a, b) = c·a, c > 0.
FluxPair upwind_advection(double speed, Range range);
/// φ(a, b) = max(a,0)²/2 + min(b,0)²/2; K1 = K2 = max(|m|, |M|).
FluxPair engquist_osher_burgers(Range range);
/// φ(a, b) = (ψ(a) + ψ(b))/2 + α(a - b)/2 for ψ one of "burgers" (a²/2) or
/// "advection" (c·a). A negative alpha selects α = sup|ψ'| on the range.
FluxPair lax_friedrichs_split(const std::string& local_flux, double alpha, Range range, double speed = 1.0);
/// φ ≡ 0.
FluxPair zero_flux(Range range);

/// φ(a, b) with a warning (not an error) when an operand leaves the
/// certified range. Throws NonFiniteValue naming the operands.
double eval_phi(const FluxPair& flux, double a, double b);

/// Worst sampled violation of a property, with the point where it occurs.
struct AuditReport {
    bool passed = true;
    /// Most negative margin seen; ≥ -tolerance iff passed.
    double worst_margin = 0.0;
    double a = 0.0, b = 0.0, c = 0.0;
    std::string detail;
    std::size_t checks = 0;
};

/// Checks φ(a+h, b) ≥ φ(a, b) - 1e-12 and φ(a, b+h) ≤ φ(a, b) + 1e-12 on a
/// samples x samples lattice over the range.
AuditReport check_monotone(const FluxPair& flux, int samples);

/// Checks that K1, K2 dominate the sampled difference quotients of φ.
AuditReport check_lipschitz(const FluxPair& flux, int samples);

/// q̃(a, b, c) = φ(a∨c, b∨c) - φ(a∧c, b∧c), cross-checked against the
/// sign decomposition
///   (s_a + s_b)/2·(φ(a,b) - φ(c,c)) + (s_a - s_b)/2·(φ(a,c) - φ(c,b)).
/// Throws Error when the two disagree beyond 1e-12 (relative to magnitude).
double entropy_flux_tilde(const FluxPair& flux, double a, double b, double c);
double entropy_flux_tilde_maxmin(const FluxPair& flux, double a, double b, double c);
double entropy_flux_tilde_signs(const FluxPair& flux, double a, double b, double c);

/// Sweeps a samples³ lattice of (a, b, c) over the range and checks
///   sign0(b-c)·[φ(a,b) - φ(c,c)] ≤ q̃(a,b,c)
///   [sign0(b-c) - sign0(a-c)]·[φ(a,b) - φ(c,c)] ≤ 0
/// with tolerance 1e-12.
AuditReport flux_inequality_audit(const FluxPair& flux, int samples);

}  // namespace nonloclaw

#endif
