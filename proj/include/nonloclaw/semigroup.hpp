#ifndef NONLOCLAW_SEMIGROUP_HPP
#define NONLOCLAW_SEMIGROUP_HPP

#include <functional>
#include <string>
#include <vector>

#include "nonloclaw/resolvent.hpp"

namespace nonloclaw {

enum class Scheme { implicit_euler, explicit_euler, forced };

/// "implicit", "explicit", "forced".
std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& name);

/// States u^m at times t_m = m·step (the last step may be short so that the
/// final time is T). Snapshots may be thinned; `reports` always has one entry
/// per step for the resolvent-based schemes.
struct Trajectory {
    std::vector<double> times;
    std::vector<GridField> states;
    Scheme scheme = Scheme::implicit_euler;
    double step = 0.0;
    std::vector<SolveReport> reports;
    /// Σ_m final L¹ residual of step m. Each resolvent is an L¹ contraction,
    /// so this bounds the L¹ distance to the exactly solved chain.
    double residual_budget = 0.0;

    const GridField& initial() const { return states.front(); }
    const GridField& final_state() const { return states.back(); }
    double final_time() const { return times.back(); }
    /// Index of the snapshot whose time equals t to 1e-12 relative; throws otherwise.
    std::size_t index_of(double t) const;
};

/// Thrown when a resolvent solve fails inside an evolution.
class StepFailure : public Error
{
public:
    StepFailure(const std::string& what, int step, SolveReport report);
    int step() const { return step_; }
    const SolveReport& report() const { return report_; }

private:
    int step_;
    SolveReport report_;
};

struct EvolveOptions {
    ResolventOptions solve;
    /// Keep every k-th state (the first and last are always kept).
    int snapshot_every = 1;
};

/// Number of steps of size `step` needed to reach T; the last may be short.
int step_count(double T, double step);
/// Size of step m (1-based) of that chain: `step`, or T - (count-1)·step for
/// a short last step.
double step_size(int m, double T, double step);

/// Implicit Euler chain u^m = (I + εB_h)⁻¹ u^{m-1}, m = 1..⌈T/ε⌉.
Trajectory evolve_implicit(const OperatorAssembly& op, const GridField& u0, double T, double eps,
                           const EvolveOptions& opts = {});

/// Forward Euler chain u^m = u^{m-1} - dt B_h u^{m-1}; each step must satisfy
/// the CFL bound of explicit_step.
Trajectory evolve_explicit(const OperatorAssembly& op, const GridField& u0, double T, double dt,
                           const EvolveOptions& opts = {});

/// Source term g(t, u) of u' + A u = g.
struct ForcingSpec {
    std::function<GridField(double, const GridField&)> g;
    double lipschitz_in_u = 0.0;
    /// c(t) with |g(t, u)|₁ ≤ c(t)(1 + |u|₁).
    std::function<double(double)> growth_bound;
};

/// Samples the growth bound on the given states and times. Throws InvalidInput
/// naming the first violation.
void validate_forcing(const ForcingSpec& forcing, const std::vector<GridField>& samples,
                      const std::vector<double>& times);

/// Splitting chain u^m = (I + dt B_h)⁻¹ (u^{m-1} + dt·g(t_{m-1}, u^{m-1})).
Trajectory evolve_forced(const OperatorAssembly& op, const GridField& u0, double T, double dt,
                         const ForcingSpec& forcing, const EvolveOptions& opts = {});

}  // namespace nonloclaw

#endif
