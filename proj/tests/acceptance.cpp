// One line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "nonloclaw/field_io.hpp"
#include "nonloclaw/initial_data.hpp"
#include "nonloclaw/local_limit.hpp"
#include "nonloclaw/verify.hpp"
#include "support.hpp"

using namespace nonloclaw;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail)
{
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << " " << name << ": " << detail << std::endl;
    if (!ok)
        ++failures;
}

void guarded(int id, const std::string& name, const std::function<void()>& body)
{
    try {
        body();
    } catch (const std::exception& e) {
        report(id, name, false, std::string("exception: ") + e.what());
    }
}

OperatorAssembly burgers_op(const Grid& g, std::vector<double> horizon, Range range)
{
    return OperatorAssembly::from_kernel(g, make_kernel("triangle", Symmetry::even_symmetric, horizon,
                                                        separable_partition(g.dim())),
                                         {engquist_osher_burgers(range)});
}

std::string fmt(double x)
{
    std::ostringstream s;
    s.precision(3);
    s << x;
    return s.str();
}

void resolvent_exactness()
{
    const Grid g = Grid::line(2, 2.0);
    const auto op = OperatorAssembly::from_kernel(g, make_kernel("constant", Symmetry::one_sided, {1.0}, {{0}}),
                                                  {upwind_advection(1.0, {-5, 5})});
    const GridField rhs = testing::field_of(g, {3.0, 0.0});
    ResolventOptions opts;
    opts.tol_residual = 1e-14;
    const auto start = Clock::now();
    const auto res = solve_resolvent(op, rhs, 1.0, opts);
    const double ms = 1e3 * seconds_since(start);
    const double err = std::max(std::abs(res.solution[0] - 2.0), std::abs(res.solution[1] - 1.0));
    report(1, "resolvent N=2 hand-solved system", err <= 1e-12 && ms < 1.0,
           "max error " + fmt(err) + ", " + fmt(ms) + " ms");
}

void resolvent_suite()
{
    const auto start = Clock::now();
    std::mt19937_64 rng(101);
    const Range range{-2.2, 2.2};
    const double lambdas[] = {0.01, 0.1, 0.5, 2.0};
    bool ok = true;
    std::string detail;
    for (const Grid& g : {Grid::line(128, 1.0), Grid::plane(32, 32, 1.0, 1.0)}) {
        std::vector<double> horizon(g.dim());
        for (int a = 0; a < g.dim(); ++a)
            horizon[a] = 4 * g.spacing(a);
        const auto op = burgers_op(g, horizon, range);
        std::vector<ResolventCase> cases;
        for (int k = 0; k < 50; ++k) {
            const GridField g1 = k % 2 ? testing::random_field(g, rng, -1.8, 1.8) : testing::smooth_field(g, rng, 1.5);
            const GridField g2 = k % 3 ? testing::random_field(g, rng, -2, 2) : g1 + testing::random_field(g, rng, 0, 0.4);
            cases.push_back({g1, g2, lambdas[k % 4]});
        }
        const auto rep = resolvent_property_suite(op, cases);
        double worst = 0.0;
        for (const auto& c : rep.checks)
            worst = std::max(worst, c.worst_excess);
        ok = ok && rep.passed && rep.checks.size() == 8;
        detail += std::to_string(g.dim()) + "D worst excess " + fmt(worst) + (rep.passed ? "; " : " FAILED; ");
    }
    const double s = seconds_since(start);
    report(2, "resolvent property suite (i)-(v), 1D N=128 and 2D 32x32, 50 pairs each", ok && s < 30.0,
           detail + fmt(s) + " s");
}

void theorem_and_entropy()
{
    const Grid g = Grid::line(128, 1.0);
    const double T = 0.5, eps = T / 64;
    const auto op = burgers_op(g, {4.0 / 128}, certified_range(-1.25, 1.25));
    const GridField u0 = riemann_data(g, 1.0, 0.0);

    auto start = Clock::now();
    std::vector<TheoremCase> cases{{u0, u0, T, eps}};
    for (std::uint64_t k = 0; k < 4; ++k) {
        const GridField bump = nonloclaw::random_data(g, 40 + k, 0.0, 0.25);
        cases.push_back({u0, k % 2 ? u0 - bump : u0 + bump, T, eps});
    }
    const auto rep = theorem_suite(op, cases);
    double worst = 0.0;
    for (const auto& c : rep.checks)
        worst = std::max(worst, c.worst_excess);
    double s = seconds_since(start);
    report(3, "implicit evolution properties (i)-(v), EO Burgers N=128", rep.passed && s < 60.0,
           std::to_string(rep.checks.size()) + " checks, worst excess " + fmt(worst) + ", " + fmt(s) + " s");

    EvolveOptions ev;
    ev.solve = TheoremSuiteOptions{}.solve;
    const Trajectory traj = evolve_implicit(op, u0, T, eps, ev);
    const auto fam = TestFunctionFamily::tensor_grid(g, T, 5, 5);
    const auto audit = entropy_audit(traj, op, fam, 9);
    const auto ctrl = entropy_audit(stationary_trajectory(sign_profile(g), T, eps), op, fam, 9);
    report(4, "entropy audit 5x5 bumps, 9 c-values, with expansion-shock control",
           audit.passed && audit.min_residual >= -1e-8 && !ctrl.passed && ctrl.min_residual <= -1e-3,
           "min residual " + fmt(audit.min_residual) + ", control " + fmt(ctrl.min_residual));
}

void cauchy()
{
    const Grid g = Grid::line(128, 1.0);
    const double T = 0.5;
    const auto op = burgers_op(g, {4.0 / 128}, certified_range(0.0, 1.0));
    const GridField u0 = riemann_data(g, 1.0, 0.0);
    EvolveOptions ev;
    ev.solve.tol_relative = 1e-12;
    std::vector<GridField> finals;
    for (int n : {8, 16, 32, 64, 128})
        finals.push_back(evolve_implicit(op, u0, T, T / n, ev).final_state());
    std::vector<double> d;
    for (std::size_t k = 0; k + 1 < finals.size(); ++k)
        d.push_back(l1_distance(finals[k], finals[k + 1]));
    bool ok = true;
    std::string detail = "differences";
    for (double x : d)
        detail += " " + fmt(x);
    detail += "; orders";
    for (std::size_t k = 0; k + 1 < d.size(); ++k) {
        const double order = std::log2(d[k] / d[k + 1]);
        ok = ok && d[k + 1] < d[k] && order >= 0.5 && order <= 1.5;
        detail += " " + fmt(order);
    }
    report(5, "Crandall-Liggett Cauchy test, eps = T/8..T/64", ok, detail);
}

void local_limit()
{
    const Grid g = Grid::line(512, 1.0);
    const auto ref = burgers_riemann(1.0, 0.0);
    const FluxPair flux = engquist_osher_burgers(certified_range(0.0, 1.0));
    const double dx = g.spacing(0);
    const auto table = local_limit_study(flux, "constant", ref, 0.25, {8 * dx, 4 * dx, 2 * dx}, g);
    const double finest = table.rows.back().error;
    std::string detail = "errors";
    for (const auto& r : table.rows)
        detail += " " + fmt(r.error);
    detail += "; local upwind baseline " + fmt(table.baseline_error);
    report(6, "local limit, Burgers shock N=512, delta = 8,4,2 dx",
           table.errors_decrease() && finest < 1.5 * table.baseline_error, detail);
}

void weak_form_identity()
{
    std::mt19937_64 rng(303);
    const Grid g1 = Grid::line(96, 1.0), g2 = Grid::plane(16, 16, 1.0, 1.0);
    const std::vector<OperatorAssembly> ops{
        burgers_op(g1, {5.0 / 96}, {-2.2, 2.2}),
        OperatorAssembly::from_kernel(g1, make_kernel("truncated_quadratic", Symmetry::one_sided, {4.0 / 96}, {{0}}),
                                      {lax_friedrichs_split("burgers", -1, {-2.2, 2.2})}),
        OperatorAssembly::from_kernel(g2, make_kernel("triangle", Symmetry::even_symmetric, {3.0 / 16, 2.0 / 16},
                                                      full_partition(2)),
                                      {engquist_osher_burgers({-2.2, 2.2})}),
    };
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const auto& op = ops[k % ops.size()];
        const GridField u = testing::random_field(op.grid(), rng, -2, 2);
        const GridField f = testing::random_field(op.grid(), rng, 0, 1);
        worst = std::max(worst, std::abs(inner(f, apply_B(op, u)) - weak_form(op, u, f)));
    }
    report(7, "summation-by-parts identity, 100 random pairs", worst <= 1e-12, "max deviation " + fmt(worst));
}

void flux_audit()
{
    const Range r{-2.0, 2.0};
    const std::vector<FluxPair> fluxes{upwind_advection(1.5, r), engquist_osher_burgers(r),
                                       lax_friedrichs_split("burgers", -1, r),
                                       lax_friedrichs_split("advection", -1, r, 0.7), zero_flux(r)};
    bool ok = true;
    double worst = 0.0;
    for (const auto& f : fluxes) {
        const auto rep = flux_inequality_audit(f, 21);
        ok = ok && rep.passed && rep.worst_margin >= -1e-12 && rep.checks == 2u * 21 * 21 * 21;
        worst = std::min(worst, rep.worst_margin);
    }
    FluxPair reversed;
    reversed.name = "reversed";
    reversed.phi = [](double, double b) { return b; };
    reversed.psi = [](double a) { return a; };
    reversed.k2 = 1.0;
    reversed.range = r;
    const auto bad = flux_inequality_audit(reversed, 21);
    report(8, "flux inequality audit on a 21^3 lattice", ok && !bad.passed,
           "worst builtin margin " + fmt(worst) + ", non-monotone margin " + fmt(bad.worst_margin));
}

void viscous()
{
    std::mt19937_64 rng(909);
    const Grid g = Grid::line(64, 1.0);
    const auto op = burgers_op(g, {4.0 / 64}, {-2.2, 2.2});
    ResolventOptions tight;
    tight.tol_relative = 1e-13;
    bool ok = true;
    double last = 0.0;
    for (int k = 0; k < 10; ++k) {
        const GridField rhs = testing::random_field(g, rng, -2, 2);
        const double lambda = k % 2 ? 0.05 : 0.5;
        const GridField u = solve_resolvent(op, rhs, lambda, tight).solution;
        double prev = std::numeric_limits<double>::infinity();
        for (double eps : {1e-2, 1e-3, 1e-4}) {
            const double d = l1_distance(solve_regularized(op, rhs, lambda, eps, tight).solution, u);
            ok = ok && d < prev;
            prev = d;
        }
        last = std::max(last, prev);
    }
    report(9, "viscous cross-check, 10 random g, eps = 1e-2,1e-3,1e-4", ok,
           "largest distance at eps=1e-4 " + fmt(last));
}

void forced()
{
    std::mt19937_64 rng(1010);
    const Grid g = Grid::line(32, 1.0);
    const auto op = OperatorAssembly::from_kernel(g, make_kernel("triangle", Symmetry::even_symmetric, {2.0 / 32}, {{0}}),
                                                  {zero_flux({-2, 2})});
    const GridField u0 = testing::random_field(g, rng, 0.5, 1.5);
    const ForcingSpec decay{[](double, const GridField& u) { return -1.0 * u; }, 1.0, [](double) { return 1.0; }};
    const double T = 1.0;
    const GridField exact = std::exp(-T) * u0;
    std::vector<double> err;
    for (double dt : {0.1, 0.05, 0.025, 0.0125, 0.00625})
        err.push_back(l1_distance(evolve_forced(op, u0, T, dt, decay).final_state(), exact));
    bool ok = true;
    std::string detail = "slopes";
    for (std::size_t k = 1; k < err.size(); ++k) {
        const double slope = std::log2(err[k - 1] / err[k]);
        ok = ok && slope >= 0.8 && slope <= 1.2;
        detail += " " + fmt(slope);
    }
    report(10, "forced decay converges at first order", ok, detail);
}

bool same_tree(const fs::path& a, const fs::path& b, std::string& why)
{
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file() || e.path().filename() == "timing.json")
            continue;
        const fs::path rel = fs::relative(e.path(), a);
        if (!fs::exists(b / rel) || read_file(e.path()) != read_file(b / rel)) {
            why = rel.string() + " differs";
            return false;
        }
        ++files;
    }
    why = std::to_string(files) + " files identical";
    return files > 0;
}

void determinism()
{
    const fs::path root = fs::temp_directory_path() / "nonloclaw_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path cfg = fs::path(NONLOCLAW_CONFIGS) / "random.cfg";
    const fs::path cfg2 = fs::path(NONLOCLAW_CONFIGS) / "shock.cfg";
    auto invoke = [&](const fs::path& c, const std::string& out, int threads) {
        const std::string cmd = std::string("\"") + NONLOCLAW_CLI + "\" run --config \"" + c.string() + "\" --out \"" +
                                (root / out).string() + "\" --seed 1234 --threads " + std::to_string(threads) +
                                " > /dev/null";
        return std::system(cmd.c_str());
    };
    const bool ran = invoke(cfg, "a", 1) == 0 && invoke(cfg, "b", 1) == 0 && invoke(cfg, "c", 4) == 0 &&
                     invoke(cfg2, "d", 1) == 0 && invoke(cfg2, "e", 4) == 0;
    std::string w1, w2, w3;
    const bool ok = ran && same_tree(root / "a", root / "b", w1) && same_tree(root / "a", root / "c", w2) &&
                    same_tree(root / "d", root / "e", w3);
    report(11, "repeated CLI runs are byte-identical, 1 and 4 threads", ok,
           ran ? w1 + "; " + w2 + "; " + w3 : "CLI invocation failed");
}

}  // namespace

int main()
{
    guarded(1, "resolvent N=2 hand-solved system", resolvent_exactness);
    guarded(2, "resolvent property suite", resolvent_suite);
    guarded(3, "implicit evolution properties and entropy audit", theorem_and_entropy);
    guarded(5, "Crandall-Liggett Cauchy test", cauchy);
    guarded(6, "local limit", local_limit);
    guarded(7, "summation-by-parts identity", weak_form_identity);
    guarded(8, "flux inequality audit", flux_audit);
    guarded(9, "viscous cross-check", viscous);
    guarded(10, "forced decay", forced);
    guarded(11, "determinism", determinism);
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
