#ifndef NONLOCLAW_RESOLVENT_HPP
#define NONLOCLAW_RESOLVENT_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nonloclaw/nonlocal_operator.hpp"

namespace nonloclaw {

enum class SolveMethod { picard, gauss_seidel, automatic };

std::string to_string(SolveMethod m);
SolveMethod parse_solve_method(const std::string& name);

struct ResolventOptions {
    /// L¹ residual target; a value ≤ 0 selects tol_relative · (1 + |g|₁).
    double tol_residual = 0.0;
    double tol_relative = 1e-10;
    int max_iters = 20000;
    SolveMethod method = SolveMethod::automatic;
    /// Starting iterate; g when empty.
    std::optional<GridField> initial_guess;
    /// Called with (iteration, iterate) after every update.
    std::function<void(int, const GridField&)> on_iterate;
};

struct SolveReport {
    int iterations = 0;
    double final_residual = 0.0;
    double tol_residual = 0.0;
    SolveMethod method_used = SolveMethod::automatic;
    /// Largest ratio of successive Picard updates, or the last residual ratio
    /// for Gauss-Seidel.
    double contraction_estimate = 0.0;
    std::vector<double> residual_history;
};

struct SolveResult {
    GridField solution;
    SolveReport report;
};

/// Raised when max_iters is exhausted; carries the residual history.
class SolverDivergence : public Error
{
public:
    SolverDivergence(const std::string& what, SolveReport report);
    const SolveReport& report() const { return report_; }

private:
    SolveReport report_;
};

/// Solves u + λ B_h u = g, the resolvent (I + λA)⁻¹ g.
///
/// `automatic` uses Picard iteration u ← g - λ B_h u when λ·L_h ≤ 1/2 and
/// nonlinear Gauss-Seidel otherwise. A Gauss-Seidel iteration is one forward
/// and one backward lexicographic sweep; each cell solves its scalar equation
/// by a bracketed Newton iteration, well posed because that scalar map is
/// strictly increasing with slope ≥ 1 for monotone fluxes.
SolveResult solve_resolvent(const OperatorAssembly& op, const GridField& g, double lambda,
                            const ResolventOptions& opts = {});

/// Solves u + λ B_h u - ε Δ_h u = g with the periodic 3-point (1D) or
/// 5-point (2D) Laplacian. For λ·L_h ≤ 1/2 this iterates the fixed-point map
/// u ← (I - εΔ_h)⁻¹ (g - λ B_h u) with a sparse Cholesky solve; otherwise
/// Gauss-Seidel with the Laplacian folded into the scalar solves. λ = 0 is a
/// single screened-Poisson solve.
SolveResult solve_regularized(const OperatorAssembly& op, const GridField& g, double lambda, double eps,
                              const ResolventOptions& opts = {});

/// Δ_h u on the periodic grid.
GridField laplacian(const GridField& u);

/// |u + λ B_h u - ε Δ_h u - g|₁.
double resolvent_residual(const OperatorAssembly& op, const GridField& u, const GridField& g, double lambda,
                          double eps = 0.0);

/// One random case for the resolvent property checks.
struct ResolventCase {
    GridField g1;
    GridField g2;
    double lambda;
};

struct PropertyCheck {
    std::string name;
    bool passed = true;
    /// Largest violation amount (≤ tolerance iff passed).
    double worst_excess = 0.0;
    double tolerance = 0.0;
};

struct PropertyReport {
    bool passed = true;
    std::vector<PropertyCheck> checks;

    const PropertyCheck* find(const std::string& name) const;
    /// Folds one measured excess into the check called `name`, creating it on
    /// first use.
    void add(const std::string& name, double excess, double tol);
};

struct ResolventSuiteOptions {
    double tol = 1e-9;
    /// Tolerance for the L^p interpolation bound with p = 2 and p = ∞.
    double tol_interpolation = 1e-8;
    ResolventOptions solve = tight_solve();

    static ResolventOptions tight_solve()
    {
        ResolventOptions o;
        o.tol_relative = 1e-12;
        return o;
    }
};

/// Checks, for every case, with T = (I + λA)⁻¹:
///  (i)   |T g|_p ≤ |g|₁^(1/p) |g|_∞^(1-1/p), p ∈ {1, 2, ∞}
///  (ii)  -|g⁻|_∞ ≤ T g ≤ |g⁺|_∞
///  (iii) |(T g1 - T g2)⁺|₁ ≤ |(g1 - g2)⁺|₁ and |T g1 - T g2|₁ ≤ |g1 - g2|₁
///  (iv)  T(shift(g)) = shift(T g) for a lattice shift
///  (v)   Σ T g = Σ g
PropertyReport resolvent_property_suite(const OperatorAssembly& op, const std::vector<ResolventCase>& cases,
                                        const ResolventSuiteOptions& opts = {});

}  // namespace nonloclaw

#endif
