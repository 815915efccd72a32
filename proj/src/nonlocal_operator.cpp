#include "nonloclaw/nonlocal_operator.hpp"

#include <cmath>
#include <sstream>

#include "nonloclaw/numeric.hpp"

namespace nonloclaw {

OperatorAssembly::OperatorAssembly(Grid grid, std::vector<Stencil> stencils, std::vector<FluxPair> fluxes)
    : grid_(std::move(grid)),
      stencils_(std::move(stencils)),
      fluxes_(std::move(fluxes)),
      range_warnings_(std::make_shared<std::atomic<std::size_t>>(0))
{
    if (stencils_.empty())
        throw InvalidInput("operator needs at least one subinteraction");
    if (stencils_.size() != fluxes_.size())
        throw InvalidInput("operator needs exactly one flux per subinteraction");
    for (std::size_t i = 0; i < stencils_.size(); ++i) {
        const FluxPair& f = fluxes_[i];
        if (!f.phi)
            throw InvalidInput("flux " + std::to_string(i) + " has no phi");
        const double hm = harmonic_mass(stencils_[i]);
        cfl_ += (f.k1 + f.k2) * hm;
        for (const auto& e : stencils_[i].entries) {
            if (e.shift.is_zero() || !(e.norm_factor > 0.0) || e.weight < 0.0)
                throw InvalidInput("stencil entries need a nonzero shift and a nonnegative weight");
            terms_.push_back({i, e.weight / e.norm_factor, shift_table(grid_, e.shift), shift_table(grid_, -e.shift)});
        }
    }
    lipschitz_ = 2.0 * cfl_;
    if (!std::isfinite(lipschitz_))
        throw InvalidInput("operator Lipschitz bound is not finite");
}

OperatorAssembly OperatorAssembly::from_kernel(const Grid& grid, const KernelSpec& kernel,
                                               std::vector<FluxPair> fluxes)
{
    const std::size_t k = kernel.subinteractions();
    if (fluxes.size() == 1 && k > 1)
        fluxes.resize(k, fluxes.front());
    std::vector<Stencil> stencils;
    for (std::size_t i = 0; i < k; ++i)
        stencils.push_back(build_stencil(kernel, grid, i));
    return OperatorAssembly(grid, std::move(stencils), std::move(fluxes));
}

double OperatorAssembly::apply_at(std::span<const double> u, std::size_t x) const
{
    const double ux = u[x];
    double acc = 0.0;
    for (const Term& t : terms_) {
        const auto& phi = fluxes_[t.flux].phi;
        acc += t.coeff * (phi(ux, u[t.forward[x]]) - phi(u[t.backward[x]], ux));
    }
    return acc;
}

void OperatorAssembly::note_range_exit() const
{
    range_warnings_->fetch_add(1);
}

GridField apply_B(const OperatorAssembly& op, const GridField& u)
{
    if (!(u.grid() == op.grid()))
        throw InvalidInput("apply_B: field is not on the operator's grid");
    const auto in = u.values();
    for (const FluxPair& f : op.fluxes()) {
        if (u.min() < f.range.lo || u.max() > f.range.hi) {
            op.note_range_exit();
            std::ostringstream msg;
            msg << "apply_B: values in [" << u.min() << ", " << u.max() << "] leave the certified range ["
                << f.range.lo << ", " << f.range.hi << "] of " << f.name;
            warn(msg.str());
            break;
        }
    }
    GridField out(u.grid());
    auto res = out.values();
    parallel_for(u.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t x = begin; x < end; ++x)
            res[x] = op.apply_at(in, x);
    });
    for (std::size_t x = 0; x < out.size(); ++x) {
        if (!std::isfinite(out[x])) {
            std::ostringstream msg;
            msg << "apply_B: non-finite value at cell " << x << " (u = " << u[x] << ")";
            throw NonFiniteValue(msg.str());
        }
    }
    return out;
}

double lipschitz_bound(const OperatorAssembly& op)
{
    return op.lipschitz_bound();
}

CflViolation::CflViolation(double dt, double admissible)
    : InvalidInput([&] {
          std::ostringstream msg;
          msg << "time step " << dt << " violates the monotonicity (CFL) bound; admissible dt <= " << admissible;
          return msg.str();
      }()),
      admissible_(admissible)
{
}

GridField explicit_step(const OperatorAssembly& op, const GridField& u, double dt)
{
    if (!(dt > 0.0))
        throw InvalidInput("explicit_step: dt must be positive");
    const double cfl = op.cfl_constant();
    if (dt * cfl > 1.0 + 1e-12)
        throw CflViolation(dt, 1.0 / cfl);
    GridField b = apply_B(op, u);
    GridField out = u;
    for (std::size_t x = 0; x < out.size(); ++x)
        out[x] -= dt * b[x];
    out.check_finite("explicit_step");
    return out;
}

double weak_form(const OperatorAssembly& op, const GridField& u, const GridField& f)
{
    if (!(u.grid() == op.grid()) || !(f.grid() == op.grid()))
        throw InvalidInput("weak_form: fields are not on the operator's grid");
    KahanSum acc;
    for (std::size_t x = 0; x < u.size(); ++x) {
        for (const auto& t : op.terms()) {
            const std::size_t y = t.forward[x];
            acc += t.coeff * (f[y] - f[x]) * op.fluxes()[t.flux].phi(u[x], u[y]);
        }
    }
    return -acc.value() * u.grid().cell_volume();
}

}  // namespace nonloclaw
