#include "nonloclaw/resolvent.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nonloclaw/numeric.hpp"

namespace nonloclaw {

namespace {

// Ratios are only meaningful while the update is well above round-off.
constexpr double kRatioFloor = 1e-13;

double default_tol(const GridField& g, const ResolventOptions& opts)
{
    if (opts.tol_residual > 0.0)
        return opts.tol_residual;
    return opts.tol_relative * (1.0 + l1_norm(g));
}

/// Periodic screened-Poisson operator I - εΔ_h, factored once.
class ScreenedPoisson
{
public:
    ScreenedPoisson(const Grid& grid, double eps)
    {
        const auto n = static_cast<Eigen::Index>(grid.size());
        std::vector<Eigen::Triplet<double>> triplets;
        for (std::size_t x = 0; x < grid.size(); ++x) {
            const auto row = static_cast<Eigen::Index>(x);
            double diag = 1.0;
            for (int a = 0; a < grid.dim(); ++a) {
                const double c = eps / (grid.spacing(a) * grid.spacing(a));
                diag += 2.0 * c;
                for (int dir : {-1, 1}) {
                    Index idx = grid.unravel(x);
                    idx[a] += dir;
                    triplets.emplace_back(row, static_cast<Eigen::Index>(grid.linear(idx)), -c);
                }
            }
            triplets.emplace_back(row, row, diag);
        }
        Eigen::SparseMatrix<double> m(n, n);
        m.setFromTriplets(triplets.begin(), triplets.end());
        solver_.compute(m);
        if (solver_.info() != Eigen::Success)
            throw Error("screened Poisson factorization failed");
    }

    GridField solve(const GridField& rhs) const
    {
        Eigen::Map<const Eigen::VectorXd> b(rhs.values().data(), static_cast<Eigen::Index>(rhs.size()));
        Eigen::VectorXd x = solver_.solve(b);
        return GridField(rhs.grid(), std::vector<double>(x.data(), x.data() + x.size()));
    }

private:
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
};

/// Neighbour tables of the Laplacian, per axis and direction.
struct LaplaceStencil {
    std::vector<std::vector<std::size_t>> neighbours;
    std::vector<double> coeff;  // ε/Δx² per table
    double diag = 0.0;          // Σ 2ε/Δx²

    LaplaceStencil(const Grid& grid, double eps)
    {
        if (eps == 0.0)
            return;
        for (int a = 0; a < grid.dim(); ++a) {
            const double c = eps / (grid.spacing(a) * grid.spacing(a));
            for (int dir : {-1, 1}) {
                ShiftVector s;
                s.offsets[a] = dir;
                neighbours.push_back(shift_table(grid, s));
                coeff.push_back(c);
            }
            diag += 2.0 * c;
        }
    }
};

/// Scalar equation of one cell:
///   F(z) = z + λ Σ c [φ(z, u_f) - φ(u_b, z)] + ε-diag·z - ε-offdiag - g(x),
/// strictly increasing with F' ≥ 1 for monotone fluxes.
class CellEquation
{
public:
    CellEquation(const OperatorAssembly& op, const LaplaceStencil& lap, double lambda)
        : op_(op), lap_(lap), lambda_(lambda)
    {
        have_derivatives_ = std::all_of(op.fluxes().begin(), op.fluxes().end(),
                                        [](const FluxPair& f) { return f.dphi_da && f.dphi_db; });
    }

    double solve(std::span<const double> u, std::size_t x, double g) const
    {
        double offdiag = 0.0;
        for (std::size_t k = 0; k < lap_.neighbours.size(); ++k)
            offdiag += lap_.coeff[k] * u[lap_.neighbours[k][x]];
        const double rhs = g + offdiag;

        auto eval = [&](double z, double* slope) {
            double b = 0.0, db = 0.0;
            for (const auto& t : op_.terms()) {
                const FluxPair& f = op_.fluxes()[t.flux];
                const double uf = u[t.forward[x]];
                const double ub = u[t.backward[x]];
                b += t.coeff * (f.phi(z, uf) - f.phi(ub, z));
                if (slope && have_derivatives_)
                    db += t.coeff * (f.dphi_da(z, uf) - f.dphi_db(ub, z));
            }
            if (slope)
                *slope = 1.0 + lambda_ * db + lap_.diag;
            return z + lambda_ * b + lap_.diag * z - rhs;
        };

        double z = u[x];
        double slope = 1.0;
        double fz = eval(z, &slope);
        if (fz == 0.0)
            return z;

        // Slope ≥ 1 puts the root within |F(z)| of z; widen only if the flux
        // is not monotone after all.
        double lo, hi, flo, fhi;
        const double ulp = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z));
        double step = std::max(std::abs(fz), ulp);
        if (fz > 0.0) {
            hi = z;
            fhi = fz;
            lo = z - step;
            flo = eval(lo, nullptr);
            for (int k = 0; flo > 0.0; ++k) {
                if (k == 60)
                    throw Error("cell solve: cannot bracket the root at cell " + std::to_string(x));
                step *= 2.0;
                hi = lo;
                fhi = flo;
                lo = z - step;
                flo = eval(lo, nullptr);
            }
        } else {
            lo = z;
            flo = fz;
            hi = z + step;
            fhi = eval(hi, nullptr);
            for (int k = 0; fhi < 0.0; ++k) {
                if (k == 60)
                    throw Error("cell solve: cannot bracket the root at cell " + std::to_string(x));
                step *= 2.0;
                lo = hi;
                flo = fhi;
                hi = z + step;
                fhi = eval(hi, nullptr);
            }
        }
        if (flo == 0.0)
            return lo;
        if (fhi == 0.0)
            return hi;

        double prev_z = z, prev_f = fz;
        for (int it = 0; it < 200; ++it) {
            double cand;
            if (have_derivatives_)
                cand = z - fz / slope;
            else
                cand = (z != prev_z && fz != prev_f) ? z - fz * (z - prev_z) / (fz - prev_f) : 0.5 * (lo + hi);
            if (!(cand > lo && cand < hi))
                cand = 0.5 * (lo + hi);
            prev_z = z;
            prev_f = fz;
            z = cand;
            fz = eval(z, &slope);
            if (fz == 0.0)
                return z;
            if (fz > 0.0) {
                hi = z;
                fhi = fz;
            } else {
                lo = z;
                flo = fz;
            }
            const double scale = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z));
            if (hi - lo <= scale || std::abs(z - prev_z) <= 0.5 * scale)
                break;
        }
        double best = z, fbest = std::abs(fz);
        if (std::abs(flo) < fbest) {
            best = lo;
            fbest = std::abs(flo);
        }
        if (std::abs(fhi) < fbest)
            best = hi;
        return best;
    }

private:
    const OperatorAssembly& op_;
    const LaplaceStencil& lap_;
    double lambda_;
    bool have_derivatives_ = false;
};

SolveResult gauss_seidel(const OperatorAssembly& op, const GridField& g, double lambda, double eps, double tol,
                         const ResolventOptions& opts)
{
    const LaplaceStencil lap(op.grid(), eps);
    const CellEquation cell(op, lap, lambda);
    GridField u = opts.initial_guess ? *opts.initial_guess : g;
    SolveReport rep;
    rep.method_used = SolveMethod::gauss_seidel;
    rep.tol_residual = tol;
    const std::size_t n = u.size();
    for (int it = 1; it <= opts.max_iters; ++it) {
        const double r = resolvent_residual(op, u, g, lambda, eps);
        rep.residual_history.push_back(r);
        rep.iterations = it;
        rep.final_residual = r;
        if (rep.residual_history.size() >= 2) {
            const double prev = rep.residual_history[rep.residual_history.size() - 2];
            if (prev > kRatioFloor)
                rep.contraction_estimate = r / prev;
        }
        if (r <= tol)
            return {std::move(u), std::move(rep)};
        auto vals = u.values();
        for (std::size_t x = 0; x < n; ++x)
            vals[x] = cell.solve(vals, x, g[x]);
        for (std::size_t x = n; x-- > 0;)
            vals[x] = cell.solve(vals, x, g[x]);
        u.check_finite("gauss_seidel");
        if (opts.on_iterate)
            opts.on_iterate(it, u);
    }
    std::ostringstream msg;
    msg << "Gauss-Seidel did not reach residual " << tol << " in " << opts.max_iters << " iterations (last "
        << rep.final_residual << ")";
    throw SolverDivergence(msg.str(), std::move(rep));
}

SolveResult picard(const OperatorAssembly& op, const GridField& g, double lambda, double eps, double tol,
                   const ResolventOptions& opts)
{
    std::optional<ScreenedPoisson> poisson;
    if (eps > 0.0)
        poisson.emplace(op.grid(), eps);
    GridField u = opts.initial_guess ? *opts.initial_guess : g;
    SolveReport rep;
    rep.method_used = SolveMethod::picard;
    rep.tol_residual = tol;
    double prev_update = -1.0;
    for (int it = 1; it <= opts.max_iters; ++it) {
        const GridField bu = apply_B(op, u);
        GridField next = g;
        for (std::size_t x = 0; x < next.size(); ++x)
            next[x] -= lambda * bu[x];
        if (poisson)
            next = poisson->solve(next);
        next.check_finite("picard");

        const double r = eps > 0.0 ? resolvent_residual(op, u, g, lambda, eps) : l1_distance(u, next);
        rep.residual_history.push_back(r);
        rep.iterations = it;
        rep.final_residual = r;
        if (r <= tol)
            return {std::move(u), std::move(rep)};

        const double update = l1_distance(u, next);
        if (prev_update > kRatioFloor * (1.0 + l1_norm(u)) && update > kRatioFloor * (1.0 + l1_norm(u)))
            rep.contraction_estimate = std::max(rep.contraction_estimate, update / prev_update);
        prev_update = update;
        u = std::move(next);
        if (opts.on_iterate)
            opts.on_iterate(it, u);
    }
    std::ostringstream msg;
    msg << "Picard iteration did not reach residual " << tol << " in " << opts.max_iters << " iterations (last "
        << rep.final_residual << ")";
    throw SolverDivergence(msg.str(), std::move(rep));
}

void check_inputs(const OperatorAssembly& op, const GridField& g, double lambda, bool allow_zero_lambda)
{
    if (!(g.grid() == op.grid()))
        throw InvalidInput("resolvent: g is not on the operator's grid");
    if (!std::isfinite(lambda) || lambda < 0.0 || (!allow_zero_lambda && lambda == 0.0))
        throw InvalidInput("resolvent: lambda must be positive");
    g.check_finite("resolvent input");
}

SolveMethod pick(SolveMethod requested, const OperatorAssembly& op, double lambda)
{
    if (requested != SolveMethod::automatic)
        return requested;
    return lambda * op.lipschitz_bound() <= 0.5 ? SolveMethod::picard : SolveMethod::gauss_seidel;
}

}  // namespace

std::string to_string(SolveMethod m)
{
    switch (m) {
    case SolveMethod::picard:
        return "picard";
    case SolveMethod::gauss_seidel:
        return "gauss_seidel";
    case SolveMethod::automatic:
        break;
    }
    return "auto";
}

SolveMethod parse_solve_method(const std::string& name)
{
    if (name == "picard")
        return SolveMethod::picard;
    if (name == "gauss_seidel")
        return SolveMethod::gauss_seidel;
    if (name == "auto")
        return SolveMethod::automatic;
    throw InvalidInput("unknown solver method '" + name + "' (expected picard, gauss_seidel or auto)");
}

SolverDivergence::SolverDivergence(const std::string& what, SolveReport report)
    : Error(what), report_(std::move(report))
{
}

GridField laplacian(const GridField& u)
{
    const Grid& grid = u.grid();
    GridField out(grid);
    for (int a = 0; a < grid.dim(); ++a) {
        ShiftVector plus, minus;
        plus.offsets[a] = 1;
        minus.offsets[a] = -1;
        const auto fw = shift_table(grid, plus);
        const auto bw = shift_table(grid, minus);
        const double c = 1.0 / (grid.spacing(a) * grid.spacing(a));
        for (std::size_t x = 0; x < u.size(); ++x)
            out[x] += c * (u[fw[x]] - 2.0 * u[x] + u[bw[x]]);
    }
    return out;
}

double resolvent_residual(const OperatorAssembly& op, const GridField& u, const GridField& g, double lambda,
                          double eps)
{
    GridField r = u;
    r -= g;
    if (lambda != 0.0) {
        const GridField bu = apply_B(op, u);
        for (std::size_t x = 0; x < r.size(); ++x)
            r[x] += lambda * bu[x];
    }
    if (eps != 0.0) {
        const GridField lu = laplacian(u);
        for (std::size_t x = 0; x < r.size(); ++x)
            r[x] -= eps * lu[x];
    }
    return l1_norm(r);
}

SolveResult solve_resolvent(const OperatorAssembly& op, const GridField& g, double lambda,
                            const ResolventOptions& opts)
{
    check_inputs(op, g, lambda, false);
    if (opts.max_iters < 1)
        throw InvalidInput("resolvent: max_iters must be at least 1");
    const double tol = default_tol(g, opts);
    if (pick(opts.method, op, lambda) == SolveMethod::picard)
        return picard(op, g, lambda, 0.0, tol, opts);
    return gauss_seidel(op, g, lambda, 0.0, tol, opts);
}

SolveResult solve_regularized(const OperatorAssembly& op, const GridField& g, double lambda, double eps,
                              const ResolventOptions& opts)
{
    check_inputs(op, g, lambda, true);
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw InvalidInput("regularized resolvent: eps must be positive");
    if (opts.max_iters < 1)
        throw InvalidInput("resolvent: max_iters must be at least 1");
    const double tol = default_tol(g, opts);
    if (lambda == 0.0) {
        GridField u = ScreenedPoisson(op.grid(), eps).solve(g);
        SolveReport rep;
        rep.method_used = SolveMethod::picard;
        rep.iterations = 1;
        rep.tol_residual = tol;
        rep.final_residual = resolvent_residual(op, u, g, 0.0, eps);
        rep.residual_history.push_back(rep.final_residual);
        return {std::move(u), std::move(rep)};
    }
    if (pick(opts.method, op, lambda) == SolveMethod::picard)
        return picard(op, g, lambda, eps, tol, opts);
    return gauss_seidel(op, g, lambda, eps, tol, opts);
}

const PropertyCheck* PropertyReport::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

void PropertyReport::add(const std::string& name, double excess, double tol)
{
    for (auto& c : checks) {
        if (c.name == name) {
            c.worst_excess = std::max(c.worst_excess, excess);
            c.passed = c.worst_excess <= tol;
            passed = passed && c.passed;
            return;
        }
    }
    PropertyCheck c{name, excess <= tol, std::max(excess, 0.0), tol};
    passed = passed && c.passed;
    checks.push_back(c);
}

PropertyReport resolvent_property_suite(const OperatorAssembly& op, const std::vector<ResolventCase>& cases,
                                        const ResolventSuiteOptions& opts)
{
    PropertyReport rep;
    const double inf = std::numeric_limits<double>::infinity();
    for (const auto& cs : cases) {
        const GridField t1 = solve_resolvent(op, cs.g1, cs.lambda, opts.solve).solution;
        const GridField t2 = solve_resolvent(op, cs.g2, cs.lambda, opts.solve).solution;

        for (const auto* pair : {&cs.g1, &cs.g2}) {
            const GridField& g = *pair;
            const GridField& t = pair == &cs.g1 ? t1 : t2;
            const double g1n = norm(g, 1.0), ginf = norm(g, inf);
            rep.add("(i) Lp bound p=1", norm(t, 1.0) - g1n, opts.tol);
            rep.add("(i) Lp bound p=2", norm(t, 2.0) - std::sqrt(g1n * ginf), opts.tol_interpolation);
            rep.add("(i) Lp bound p=inf", norm(t, inf) - ginf, opts.tol_interpolation);

            const double upper = std::max(g.max(), 0.0);
            const double lower = std::min(g.min(), 0.0);
            rep.add("(ii) maximum principle", std::max(t.max() - upper, lower - t.min()), opts.tol);

            rep.add("(v) mass", std::abs(t.mass() - g.mass()), opts.tol);
        }

        const double pos_out = l1_norm(positive_part(t1 - t2));
        const double pos_in = l1_norm(positive_part(cs.g1 - cs.g2));
        rep.add("(iii) order preservation", pos_out - pos_in, opts.tol);
        rep.add("(iii) L1 contraction", l1_distance(t1, t2) - l1_distance(cs.g1, cs.g2), opts.tol);

        ShiftVector s;
        for (int a = 0; a < op.grid().dim(); ++a)
            s.offsets[a] = std::max(1, op.grid().cells(a) / 3);
        const GridField shifted = solve_resolvent(op, shift(cs.g1, s), cs.lambda, opts.solve).solution;
        rep.add("(iv) translation", l1_distance(shifted, shift(t1, s)), opts.tol);
    }
    return rep;
}

}  // namespace nonloclaw
