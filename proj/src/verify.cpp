#include "nonloclaw/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "nonloclaw/field_io.hpp"

namespace nonloclaw {

namespace {

double bump(double s)
{
    if (!(std::abs(s) < 1.0))
        return 0.0;
    const double q = 1.0 - s * s;
    return q * q * q;
}

double periodic_offset(double x, double c, double extent)
{
    double d = std::fmod(x - c, extent);
    if (d > 0.5 * extent)
        d -= extent;
    else if (d < -0.5 * extent)
        d += extent;
    return d;
}

void require_full_trajectory(const Trajectory& traj, const OperatorAssembly& op)
{
    if (traj.states.size() < 2 || traj.states.size() != traj.times.size())
        throw InvalidInput("entropy residual needs a trajectory with at least two snapshots");
    if (!(traj.states.front().grid() == op.grid()))
        throw InvalidInput("trajectory is not on the operator's grid");
    for (std::size_t m = 1; m < traj.times.size(); ++m) {
        const double dt = traj.times[m] - traj.times[m - 1];
        if (!(dt > 0.0) || (traj.step > 0.0 && dt > traj.step * (1.0 + 1e-9)))
            throw InvalidInput("entropy residual needs every time step stored (no snapshot thinning)");
    }
}

using Samples = std::vector<std::vector<double>>;

Samples sample(const Trajectory& traj, const Grid& grid, const SpaceTimeFunction& f)
{
    Samples out(traj.times.size(), std::vector<double>(grid.size()));
    std::vector<double> pos(grid.dim());
    for (std::size_t x = 0; x < grid.size(); ++x) {
        const Index idx = grid.unravel(x);
        for (int a = 0; a < grid.dim(); ++a)
            pos[a] = grid.center(a, idx[a]);
        for (std::size_t m = 0; m < traj.times.size(); ++m) {
            const double v = f(pos, traj.times[m]);
            if (!(v >= 0.0) || !std::isfinite(v)) {
                std::ostringstream msg;
                msg << "test function is negative or non-finite (" << v << ") at cell " << x << ", t = "
                    << traj.times[m];
                throw InvalidInput(msg.str());
            }
            out[m][x] = v;
        }
    }
    return out;
}

double residual_sampled(const Trajectory& traj, const OperatorAssembly& op, const Samples& f, double c)
{
    const std::size_t M = traj.states.size() - 1;
    const std::size_t n = op.grid().size();
    std::vector<double> phi_cc;
    for (const FluxPair& fl : op.fluxes())
        phi_cc.push_back(fl.phi(c, c));
    std::vector<char> active(M + 1);
    for (std::size_t m = 0; m <= M; ++m)
        active[m] = std::any_of(f[m].begin(), f[m].end(), [](double v) { return v != 0.0; });

    KahanSum total;
    for (std::size_t m = 0; m <= M; ++m) {
        const auto u = traj.states[m].values();
        const std::vector<double>& fm = f[m];
        if (m < M && (active[m] || active[m + 1])) {
            const std::vector<double>& fn = f[m + 1];
            for (std::size_t x = 0; x < n; ++x)
                total += std::abs(u[x] - c) * (fn[x] - fm[x]);
        }
        if (!active[m])
            continue;
        const double dt = m >= 1 ? traj.times[m] - traj.times[m - 1] : traj.times[1] - traj.times[0];
        KahanSum flux;
        for (std::size_t x = 0; x < n; ++x) {
            const double sx = fm[x] * sign0(u[x] - c);
            for (const auto& t : op.terms()) {
                const std::size_t y = t.forward[x];
                const double jump = op.fluxes()[t.flux].phi(u[x], u[y]) - phi_cc[t.flux];
                flux += t.coeff * (fm[y] * sign0(u[y] - c) - sx) * jump;
            }
        }
        total += dt * flux.value();
    }
    return total.value() * op.grid().cell_volume();
}

std::vector<double> c_values(const Trajectory& traj, int c_samples)
{
    std::vector<double> all;
    for (const auto& s : traj.states)
        all.insert(all.end(), s.values().begin(), s.values().end());
    std::sort(all.begin(), all.end());
    const int nq = c_samples - 2;
    std::vector<double> cs;
    for (int k = 0; k < nq; ++k) {
        const double level = nq == 1 ? 0.5 : static_cast<double>(k) / (nq - 1);
        cs.push_back(all[static_cast<std::size_t>(std::lround(level * static_cast<double>(all.size() - 1)))]);
    }
    const double big = std::max(std::abs(all.front()), std::abs(all.back())) + 1.0;
    cs.push_back(-big);
    cs.push_back(big);
    return cs;
}

}  // namespace

double TensorBump::operator()(std::span<const double> x, double t, std::span<const double> extent) const
{
    double v = bump((t - t_center) / t_width);
    for (std::size_t a = 0; a < center.size() && v != 0.0; ++a)
        v *= bump(periodic_offset(x[a], center[a], extent[a]) / width[a]);
    return v;
}

TestFunctionFamily TestFunctionFamily::tensor_grid(const Grid& grid, double T, int n_space, int n_time)
{
    if (n_space < 1 || n_time < 1 || !(T > 0.0))
        throw InvalidInput("tensor_grid needs positive counts and T > 0");
    TestFunctionFamily fam;
    for (int a = 0; a < grid.dim(); ++a)
        fam.extent.push_back(grid.extent(a));
    const int per_space = grid.dim() == 1 ? n_space : n_space * n_space;
    for (int k = 0; k < n_time; ++k) {
        for (int s = 0; s < per_space; ++s) {
            TensorBump b;
            int rest = s;
            for (int a = grid.dim() - 1; a >= 0; --a) {
                const int i = rest % n_space;
                rest /= n_space;
                b.center.insert(b.center.begin(), (i + 0.5) * grid.extent(a) / n_space);
                b.width.insert(b.width.begin(), std::min(1.0 / n_space, 0.45) * grid.extent(a));
            }
            b.t_center = T * (k + 1) / (n_time + 1);
            b.t_width = 0.9 * T / (n_time + 1);
            fam.members.push_back(std::move(b));
        }
    }
    fam.validate(T);
    return fam;
}

void TestFunctionFamily::validate(double T) const
{
    if (kind != "tensor_bump")
        throw InvalidInput("unknown test function kind '" + kind + "'");
    for (const TensorBump& b : members) {
        if (b.center.size() != extent.size() || b.width.size() != extent.size())
            throw InvalidInput("test function dimension does not match the family extent");
        if (!(b.t_width > 0.0) || !(b.t_center - b.t_width > 0.0) || !(b.t_center + b.t_width < T))
            throw InvalidInput("test function support must lie strictly inside (0, T)");
        for (std::size_t a = 0; a < extent.size(); ++a)
            if (!(b.width[a] > 0.0) || !(b.width[a] < 0.5 * extent[a]))
                throw InvalidInput("test function spatial width must lie in (0, extent/2)");
    }
}

SpaceTimeFunction TestFunctionFamily::function(std::size_t k) const
{
    const TensorBump b = members.at(k);
    const std::vector<double> ext = extent;
    return [b, ext](std::span<const double> x, double t) { return b(x, t, ext); };
}

double entropy_residual(const Trajectory& traj, const OperatorAssembly& op, const SpaceTimeFunction& f, double c)
{
    require_full_trajectory(traj, op);
    return residual_sampled(traj, op, sample(traj, op.grid(), f), c);
}

EntropyReport entropy_audit(const Trajectory& traj, const OperatorAssembly& op, const TestFunctionFamily& family,
                            int c_samples, const EntropyAuditOptions& opts)
{
    require_full_trajectory(traj, op);
    if (c_samples < 3)
        throw InvalidInput("entropy_audit needs at least 3 c samples");
    family.validate(traj.final_time());
    const std::vector<double> cs = c_values(traj, c_samples);
    const std::size_t nc = cs.size();

    EntropyReport rep;
    rep.residual_budget = traj.residual_budget;
    rep.tolerance = opts.tolerance > 0.0 ? opts.tolerance : 1e-8 * l1_norm(traj.initial()) * traj.final_time();
    rep.entries.resize(family.members.size() * nc);
    parallel_for(family.members.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const Samples f = sample(traj, op.grid(), family.function(k));
            for (std::size_t j = 0; j < nc; ++j)
                rep.entries[k * nc + j] = {k, cs[j], j + 2 >= nc, residual_sampled(traj, op, f, cs[j])};
        }
    });

    rep.min_residual = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
        const EntropyEntry& e = rep.entries[i];
        if (e.residual < rep.min_residual) {
            rep.min_residual = e.residual;
            rep.worst = i;
        }
        if (e.sentinel)
            rep.sentinel_max_abs = std::max(rep.sentinel_max_abs, std::abs(e.residual));
    }
    rep.passed = rep.min_residual >= -rep.tolerance && rep.sentinel_max_abs <= rep.tolerance;
    return rep;
}

void write_entropy_csv(std::ostream& out, const EntropyReport& report, const TestFunctionFamily& family)
{
    const std::size_t dim = family.extent.size();
    out << "member,t_center,t_width,x_center,x_width";
    if (dim > 1)
        out << ",y_center,y_width";
    out << ",c,sentinel,residual\n";
    for (const EntropyEntry& e : report.entries) {
        const TensorBump& b = family.members.at(e.member);
        out << e.member << ',' << format_double(b.t_center) << ',' << format_double(b.t_width);
        for (std::size_t a = 0; a < dim; ++a)
            out << ',' << format_double(b.center[a]) << ',' << format_double(b.width[a]);
        out << ',' << format_double(e.c) << ',' << (e.sentinel ? 1 : 0) << ',' << format_double(e.residual) << '\n';
    }
    out << "# summary: " << (report.passed ? "pass" : "fail") << " min_residual=" << format_double(report.min_residual);
    if (!report.entries.empty()) {
        const EntropyEntry& w = report.entries[report.worst];
        out << " at member=" << w.member << " c=" << format_double(w.c);
    }
    out << " sentinel_max_abs=" << format_double(report.sentinel_max_abs)
        << " tolerance=" << format_double(report.tolerance) << '\n';
}

GridField sign_profile(const Grid& grid)
{
    if (grid.dim() != 1)
        throw InvalidInput("sign_profile needs a 1D grid");
    GridField u(grid);
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] = -sign0(grid.center(0, static_cast<int>(i)) - 0.5 * grid.extent(0));
    return u;
}

Trajectory stationary_trajectory(const GridField& u, double T, double dt)
{
    if (!(T > 0.0) || !(dt > 0.0))
        throw InvalidInput("stationary_trajectory needs T > 0 and dt > 0");
    const int steps = step_count(T, dt);
    Trajectory traj;
    traj.scheme = Scheme::implicit_euler;
    traj.step = dt;
    for (int m = 0; m <= steps; ++m) {
        traj.times.push_back(m == steps ? T : m * dt);
        traj.states.push_back(u);
    }
    return traj;
}

PropertyReport theorem_suite(const OperatorAssembly& op, const std::vector<TheoremCase>& cases,
                             const TheoremSuiteOptions& opts)
{
    const double inf = std::numeric_limits<double>::infinity();
    const Grid& grid = op.grid();
    std::vector<ShiftVector> lattice;
    for (std::size_t x = 1; x < grid.size(); ++x) {
        const Index idx = grid.unravel(x);
        lattice.push_back(ShiftVector{idx});
    }
    EvolveOptions ev;
    ev.solve = opts.solve;

    PropertyReport rep;
    for (const TheoremCase& cs : cases) {
        const Trajectory U = evolve_implicit(op, cs.u0, cs.T, cs.eps, ev);
        const Trajectory V = evolve_implicit(op, cs.v0, cs.T, cs.eps, ev);
        const double both = U.residual_budget + V.residual_budget;

        for (const Trajectory* tr : {&U, &V}) {
            const GridField& a0 = tr->initial();
            const double b = tr->residual_budget;
            const double pointwise = b / grid.cell_volume();
            const double n1 = norm(a0, 1.0), ninf = norm(a0, inf);
            const double upper = std::max(a0.max(), 0.0), lower = std::min(a0.min(), 0.0);
            std::vector<double> mod0;
            for (const ShiftVector& y : lattice)
                mod0.push_back(l1_modulus(a0, y));
            for (const GridField& u : tr->states) {
                rep.add("(i) Lp bound p=1", norm(u, 1.0) - n1 - b, opts.tol);
                rep.add("(i) Lp bound p=2", norm(u, 2.0) - std::sqrt(n1 * ninf) - b, opts.tol);
                rep.add("(i) Lp bound p=inf", norm(u, inf) - ninf - pointwise, opts.tol);
                rep.add("(ii) maximum principle", std::max(u.max() - upper, lower - u.min()) - pointwise, opts.tol);
                double worst_mod = -inf;
                for (std::size_t k = 0; k < lattice.size(); ++k)
                    worst_mod = std::max(worst_mod, l1_modulus(u, lattice[k]) - mod0[k] - 2.0 * b);
                rep.add("(iv) equicontinuity", worst_mod, opts.tol);
                rep.add("(v) mass", std::abs(u.mass() - a0.mass()) - b, opts.tol);
            }
        }
        const double pos0 = l1_norm(positive_part(cs.u0 - cs.v0));
        const double dist0 = l1_distance(cs.u0, cs.v0);
        for (std::size_t k = 0; k < U.states.size(); ++k) {
            rep.add("(iii) order preservation", l1_norm(positive_part(U.states[k] - V.states[k])) - pos0 - both,
                    opts.tol);
            rep.add("(iii) L1 contraction", l1_distance(U.states[k], V.states[k]) - dist0 - both, opts.tol);
        }

        if (!opts.semigroup_checks)
            continue;
        const int steps = step_count(cs.T, cs.eps);
        if (steps >= 2) {
            const double t1 = (steps / 2) * cs.eps;
            const Trajectory first = evolve_implicit(op, cs.u0, t1, cs.eps, ev);
            const Trajectory second = evolve_implicit(op, first.final_state(), cs.T - t1, cs.eps, ev);
            rep.add("semigroup",
                    l1_distance(second.final_state(), U.final_state()) - U.residual_budget - first.residual_budget -
                        second.residual_budget,
                    opts.tol);
        }
        ShiftVector s;
        for (int a = 0; a < grid.dim(); ++a)
            s.offsets[a] = std::max(1, grid.cells(a) / 3);
        const Trajectory moved = evolve_implicit(op, shift(cs.u0, s), cs.T, cs.eps, ev);
        rep.add("translation",
                l1_distance(moved.final_state(), shift(U.final_state(), s)) - U.residual_budget -
                    moved.residual_budget,
                opts.tol);
    }
    return rep;
}

void write_property_report(std::ostream& out, const PropertyReport& report)
{
    for (const PropertyCheck& c : report.checks)
        out << (c.passed ? "PASS " : "FAIL ") << c.name << " worst_excess=" << format_double(c.worst_excess)
            << " tolerance=" << format_double(c.tolerance) << '\n';
}

}  // namespace nonloclaw
