#ifndef NONLOCLAW_KERNELS_HPP
#define NONLOCLAW_KERNELS_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nonloclaw/grid.hpp"

namespace nonloclaw {

enum class Symmetry { even_symmetric, one_sided };

std::string to_string(Symmetry s);
Symmetry parse_symmetry(const std::string& name);

/// Kernel profile: a nonnegative bounded function of the physical shift h.
/// Components of h outside the active subinteraction are zero.
using Profile = std::function<double(std::span<const double> h)>;

/// Interaction kernels ω_i together with the axis partition B_i.
struct KernelSpec {
    Symmetry symmetry = Symmetry::even_symmetric;
    /// Horizon δ per axis.
    std::vector<double> horizon;
    Profile profile;
    /// Human-readable profile name, echoed in manifests.
    std::string profile_name;
    /// Disjoint axis sets (0-based) covering every axis, one per subinteraction.
    std::vector<std::vector<int>> partition;

    int dim() const { return static_cast<int>(horizon.size()); }
    std::size_t subinteractions() const { return partition.size(); }
};

// Builtin profiles. All vanish outside the horizon box and, for one_sided
// kernels, outside the open positive orthant. Products run over the axes
// where h is nonzero-capable, i.e. the active axes of the evaluation.

/// 1/Π(δ) (even: 1/Π(2δ)) on the horizon box.
Profile constant_profile(Symmetry sym, std::vector<double> horizon);
/// Π (1 - |h_j|/δ_j)_+ / δ_j.
Profile triangle_profile(Symmetry sym, std::vector<double> horizon);
/// Π (1 - (h_j/δ_j)²)_+.
Profile truncated_quadratic_profile(Symmetry sym, std::vector<double> horizon);
/// Piecewise-linear table over r = max_j |h_j|/δ_j ∈ [0, 1]; samples at
/// r_k = k/(K-1). Zero for r > 1.
Profile tabulated_profile(Symmetry sym, std::vector<double> horizon, std::vector<double> samples);

/// Builds a KernelSpec from a builtin name: constant, triangle, truncated_quadratic.
KernelSpec make_kernel(const std::string& profile, Symmetry sym, std::vector<double> horizon,
                       std::vector<std::vector<int>> partition);

/// One partition block per axis ({{0},{1},...}), the axis-separable case.
std::vector<std::vector<int>> separable_partition(int dim);
/// A single block holding every axis, the full-interaction case.
std::vector<std::vector<int>> full_partition(int dim);

/// Outcome of validate(): problems is empty iff the spec is admissible.
struct KernelValidation {
    bool ok = true;
    std::vector<std::string> problems;
};

/// Checks profile sign, support versus symmetry class, and the partition.
/// Sampling uses `samples_per_axis` lattice points per horizon on each side.
KernelValidation validate(const KernelSpec& spec, int samples_per_axis = 32);

struct StencilEntry {
    ShiftVector shift;
    /// Renormalized quadrature weight, ≥ 0.
    double weight;
    /// |shift·Δx| in physical units, > 0.
    double norm_factor;
};

/// Lattice quadrature of ω_i(β_i(h)) dh for subinteraction i.
struct Stencil {
    std::size_t subinteraction = 0;
    std::vector<StencilEntry> entries;

    double weight_sum() const;
};

/// Grid-aligned quadrature: all nonzero lattice shifts in the horizon box on
/// the axes of partition block i (signed for even kernels, strictly positive
/// for one-sided ones), weighted by the profile times the cell volume of the
/// active axes and renormalized to unit sum. Zero-weight nodes are dropped.
/// Throws InvalidInput for an unresolved or non-integral horizon.
Stencil build_stencil(const KernelSpec& spec, const Grid& grid, std::size_t i);

/// Σ_j w_j / |β_j|, the discrete ∫ ω_i(β_i) / |β_i|.
double harmonic_mass(const Stencil& stencil);

}  // namespace nonloclaw

#endif
