#include "nonloclaw/semigroup.hpp"

#include <cmath>
#include <sstream>

namespace nonloclaw {

namespace {

void require_evolution(const OperatorAssembly& op, const GridField& u0, double T, double step, const char* what)
{
    if (!(u0.grid() == op.grid()))
        throw InvalidInput(std::string(what) + ": initial data is not on the operator's grid");
    if (!(T > 0.0) || !std::isfinite(T))
        throw InvalidInput(std::string(what) + ": final time must be positive");
    if (!(step > 0.0) || !std::isfinite(step))
        throw InvalidInput(std::string(what) + ": step must be positive");
    if (!(T / step < 1e8))
        throw InvalidInput(std::string(what) + ": too many steps");
    u0.check_finite(what);
}

class Recorder
{
public:
    Recorder(Trajectory& traj, int every, int steps) : traj_(traj), every_(every), steps_(steps)
    {
        if (every_ < 1)
            throw InvalidInput("snapshot_every must be at least 1");
    }

    void keep(int m, double t, const GridField& u)
    {
        if (m == 0 || m == steps_ || m % every_ == 0) {
            traj_.times.push_back(t);
            traj_.states.push_back(u);
        }
    }

private:
    Trajectory& traj_;
    int every_;
    int steps_;
};

SolveResult checked_solve(const OperatorAssembly& op, const GridField& g, double lambda,
                          const ResolventOptions& opts, int m)
{
    try {
        return solve_resolvent(op, g, lambda, opts);
    } catch (const SolverDivergence& e) {
        std::ostringstream msg;
        msg << "step " << m << ": " << e.what();
        throw StepFailure(msg.str(), m, e.report());
    }
}

}  // namespace

std::string to_string(Scheme s)
{
    switch (s) {
    case Scheme::implicit_euler:
        return "implicit";
    case Scheme::explicit_euler:
        return "explicit";
    case Scheme::forced:
        return "forced";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name)
{
    if (name == "implicit")
        return Scheme::implicit_euler;
    if (name == "explicit")
        return Scheme::explicit_euler;
    if (name == "forced")
        return Scheme::forced;
    throw InvalidInput("unknown scheme '" + name + "' (expected implicit, explicit or forced)");
}

std::size_t Trajectory::index_of(double t) const
{
    for (std::size_t k = 0; k < times.size(); ++k)
        if (std::abs(times[k] - t) <= 1e-12 * std::max(1.0, std::abs(t)))
            return k;
    std::ostringstream msg;
    msg << "no snapshot at time " << t;
    throw InvalidInput(msg.str());
}

StepFailure::StepFailure(const std::string& what, int step, SolveReport report)
    : Error(what), step_(step), report_(std::move(report))
{
}

namespace {

bool is_multiple(double T, double step)
{
    const double r = T / step;
    const double n = std::round(r);
    return n >= 1.0 && std::abs(r - n) <= 1e-9 * n;
}

}  // namespace

int step_count(double T, double step)
{
    if (is_multiple(T, step))
        return static_cast<int>(std::round(T / step));
    return static_cast<int>(std::ceil(T / step));
}

double step_size(int m, double T, double step)
{
    const int n = step_count(T, step);
    if (m < n || is_multiple(T, step))
        return step;
    return T - (n - 1) * step;
}

Trajectory evolve_implicit(const OperatorAssembly& op, const GridField& u0, double T, double eps,
                           const EvolveOptions& opts)
{
    require_evolution(op, u0, T, eps, "evolve_implicit");
    const int steps = step_count(T, eps);
    Trajectory traj;
    traj.scheme = Scheme::implicit_euler;
    traj.step = eps;
    Recorder rec(traj, opts.snapshot_every, steps);
    rec.keep(0, 0.0, u0);
    GridField u = u0;
    for (int m = 1; m <= steps; ++m) {
        SolveResult r = checked_solve(op, u, step_size(m, T, eps), opts.solve, m);
        traj.residual_budget += r.report.final_residual;
        traj.reports.push_back(std::move(r.report));
        u = std::move(r.solution);
        rec.keep(m, m == steps ? T : m * eps, u);
    }
    return traj;
}

Trajectory evolve_explicit(const OperatorAssembly& op, const GridField& u0, double T, double dt,
                           const EvolveOptions& opts)
{
    require_evolution(op, u0, T, dt, "evolve_explicit");
    const int steps = step_count(T, dt);
    Trajectory traj;
    traj.scheme = Scheme::explicit_euler;
    traj.step = dt;
    Recorder rec(traj, opts.snapshot_every, steps);
    rec.keep(0, 0.0, u0);
    GridField u = u0;
    for (int m = 1; m <= steps; ++m) {
        u = explicit_step(op, u, step_size(m, T, dt));
        rec.keep(m, m == steps ? T : m * dt, u);
    }
    return traj;
}

void validate_forcing(const ForcingSpec& forcing, const std::vector<GridField>& samples,
                      const std::vector<double>& times)
{
    if (!forcing.g)
        throw InvalidInput("forcing has no source function");
    if (!(forcing.lipschitz_in_u >= 0.0))
        throw InvalidInput("forcing Lipschitz constant must be nonnegative");
    for (double t : times) {
        for (const GridField& u : samples) {
            const GridField gu = forcing.g(t, u);
            if (!(gu.grid() == u.grid()))
                throw InvalidInput("forcing returned a field on the wrong grid");
            gu.check_finite("forcing");
            if (!forcing.growth_bound)
                continue;
            const double bound = forcing.growth_bound(t) * (1.0 + l1_norm(u));
            if (l1_norm(gu) > bound * (1.0 + 1e-12) + 1e-14) {
                std::ostringstream msg;
                msg << "forcing violates its growth bound at t = " << t << ": |g|_1 = " << l1_norm(gu)
                    << " > " << bound;
                throw InvalidInput(msg.str());
            }
        }
    }
}

Trajectory evolve_forced(const OperatorAssembly& op, const GridField& u0, double T, double dt,
                         const ForcingSpec& forcing, const EvolveOptions& opts)
{
    require_evolution(op, u0, T, dt, "evolve_forced");
    validate_forcing(forcing, {u0}, {0.0, T});
    const int steps = step_count(T, dt);
    Trajectory traj;
    traj.scheme = Scheme::forced;
    traj.step = dt;
    Recorder rec(traj, opts.snapshot_every, steps);
    rec.keep(0, 0.0, u0);
    GridField u = u0;
    double t = 0.0;
    for (int m = 1; m <= steps; ++m) {
        const double tm = m == steps ? T : m * dt;
        const double h = step_size(m, T, dt);
        GridField src = forcing.g(t, u);
        if (!(src.grid() == u.grid()))
            throw InvalidInput("forcing returned a field on the wrong grid");
        try {
            src.check_finite("forcing");
        } catch (const NonFiniteValue& e) {
            std::ostringstream msg;
            msg << "step " << m << ": " << e.what();
            throw NonFiniteValue(msg.str());
        }
        GridField rhs = u + h * src;
        SolveResult r = checked_solve(op, rhs, h, opts.solve, m);
        traj.residual_budget += r.report.final_residual;
        traj.reports.push_back(std::move(r.report));
        u = std::move(r.solution);
        t = tm;
        rec.keep(m, t, u);
    }
    return traj;
}

}  // namespace nonloclaw
