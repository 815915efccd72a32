#ifndef NONLOCLAW_NONLOCAL_OPERATOR_HPP
#define NONLOCLAW_NONLOCAL_OPERATOR_HPP

#include <atomic>
#include <memory>
#include <span>
#include <vector>

#include "nonloclaw/fluxes.hpp"
#include "nonloclaw/grid.hpp"
#include "nonloclaw/kernels.hpp"

namespace nonloclaw {

/// The discrete nonlocal divergence
///
///   (B_h u)(x) = Σ_i Σ_j (w_ij / |β_ij|) [φ_i(u(x), u(x+β_ij)) - φ_i(u(x-β_ij), u(x))]
///
/// over one stencil and one flux per subinteraction. Immutable after
/// construction and safe to share across threads.
class OperatorAssembly
{
public:
    OperatorAssembly(Grid grid, std::vector<Stencil> stencils, std::vector<FluxPair> fluxes);

    /// Builds one stencil per partition block of `kernel`. A single flux is
    /// reused for every subinteraction.
    static OperatorAssembly from_kernel(const Grid& grid, const KernelSpec& kernel, std::vector<FluxPair> fluxes);

    const Grid& grid() const { return grid_; }
    const std::vector<Stencil>& stencils() const { return stencils_; }
    const std::vector<FluxPair>& fluxes() const { return fluxes_; }
    std::size_t subinteractions() const { return stencils_.size(); }

    /// L_h = Σ_i (K_i1 + K_i2) · 2 · harmonic_mass(stencil_i).
    double lipschitz_bound() const { return lipschitz_; }
    /// Σ_i (K_i1 + K_i2) · harmonic_mass(stencil_i); forward Euler is monotone
    /// for dt · cfl_constant ≤ 1.
    double cfl_constant() const { return cfl_; }

    /// One stencil node flattened for the cell loops.
    struct Term {
        std::size_t flux;
        double coeff;  // w / |β|
        std::vector<std::size_t> forward;   // x + β
        std::vector<std::size_t> backward;  // x - β
    };
    const std::vector<Term>& terms() const { return terms_; }

    /// (B_h u)(x) for a single cell of a raw value array.
    double apply_at(std::span<const double> u, std::size_t x) const;

    /// Number of apply() calls that saw a value outside a flux's certified range.
    std::size_t range_warnings() const { return range_warnings_->load(); }
    void note_range_exit() const;

private:
    Grid grid_;
    std::vector<Stencil> stencils_;
    std::vector<FluxPair> fluxes_;
    std::vector<Term> terms_;
    double lipschitz_ = 0.0;
    double cfl_ = 0.0;
    std::shared_ptr<std::atomic<std::size_t>> range_warnings_;
};

/// B_h u. Throws NonFiniteValue naming the first non-finite output cell.
GridField apply_B(const OperatorAssembly& op, const GridField& u);

double lipschitz_bound(const OperatorAssembly& op);

/// Thrown by explicit_step when dt violates the monotonicity (CFL) bound.
class CflViolation : public InvalidInput
{
public:
    CflViolation(double dt, double admissible);
    double admissible_dt() const { return admissible_; }

private:
    double admissible_;
};

/// u - dt · B_h u, requiring dt · cfl_constant ≤ 1.
GridField explicit_step(const OperatorAssembly& op, const GridField& u, double dt);

/// -Σ_x Σ_ij (w_ij/|β_ij|)(τ_β f - f)(x) φ_i(u(x), u(x+β)) · cell volume, the
/// summation-by-parts form of Σ_x f · B_h u · cell volume.
double weak_form(const OperatorAssembly& op, const GridField& u, const GridField& f);

}  // namespace nonloclaw

#endif
