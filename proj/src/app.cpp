#include "nonloclaw/app.hpp"

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "nonloclaw/config.hpp"
#include "nonloclaw/field_io.hpp"
#include "nonloclaw/initial_data.hpp"
#include "nonloclaw/local_limit.hpp"
#include "nonloclaw/trajectory_io.hpp"
#include "nonloclaw/verify.hpp"

namespace nonloclaw {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kSections{"grid", "kernel", "flux", "scheme", "initial", "outputs", "verify", "study",
                                      "resolvent"};

/// Failure of a property check; exit 1.
class PropertyFailure : public Error
{
public:
    using Error::Error;
};

struct Problem {
    Grid grid = Grid::line(2, 1.0);
    KernelSpec kernel;
    FluxPair flux;
    std::optional<OperatorAssembly> op;
    GridField u0{Grid::line(2, 1.0)};
    json description;
};

std::vector<int> int_list(const Config& cfg, const std::string& section, const std::string& key)
{
    std::vector<int> out;
    for (double v : cfg.get_doubles(section, key)) {
        if (v != std::floor(v) || !(v >= 1.0) || v > 1e8)
            cfg.fail(section, key, "'" + key + "' must hold positive integers");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

std::vector<double> per_axis(const Config& cfg, const std::string& section, const std::string& key, int dim,
                             double fallback)
{
    if (!cfg.has(section, key))
        return std::vector<double>(dim, fallback);
    std::vector<double> v = cfg.get_doubles(section, key);
    if (v.size() == 1)
        v.resize(dim, v.front());
    if (static_cast<int>(v.size()) != dim)
        cfg.fail(section, key, "'" + key + "' needs one value or one per axis");
    return v;
}

Grid make_grid(const Config& cfg)
{
    cfg.allow_keys("grid", {"cells", "extent"});
    const std::vector<int> cells = int_list(cfg, "grid", "cells");
    if (cells.empty() || cells.size() > 2)
        cfg.fail("grid", "cells", "'cells' needs one or two entries");
    const int dim = static_cast<int>(cells.size());
    const std::vector<double> extent = per_axis(cfg, "grid", "extent", dim, 1.0);
    std::vector<double> spacing;
    for (int a = 0; a < dim; ++a) {
        if (!(extent[a] > 0.0))
            cfg.fail("grid", "extent", "'extent' must be positive");
        spacing.push_back(extent[a] / cells[a]);
    }
    return Grid(cells, spacing);
}

KernelSpec make_kernel_spec(const Config& cfg, const Grid& grid, Symmetry default_symmetry)
{
    cfg.allow_keys("kernel", {"profile", "symmetry", "horizon", "horizon_cells", "partition"});
    const std::string profile = cfg.get_string("kernel", "profile", "triangle");
    Symmetry sym = default_symmetry;
    try {
        if (cfg.has("kernel", "symmetry"))
            sym = parse_symmetry(cfg.get_string("kernel", "symmetry"));
    } catch (const InvalidInput& e) {
        cfg.fail("kernel", "symmetry", e.what());
    }
    if (cfg.has("kernel", "horizon") == cfg.has("kernel", "horizon_cells"))
        cfg.fail("kernel", "horizon", "give exactly one of 'horizon' and 'horizon_cells'");
    std::vector<double> horizon;
    const char* key = cfg.has("kernel", "horizon") ? "horizon" : "horizon_cells";
    horizon = per_axis(cfg, "kernel", key, grid.dim(), 0.0);
    if (std::string(key) == "horizon_cells")
        for (int a = 0; a < grid.dim(); ++a)
            horizon[a] *= grid.spacing(a);
    const std::string part = cfg.get_string("kernel", "partition", "separable");
    std::vector<std::vector<int>> partition;
    if (part == "separable")
        partition = separable_partition(grid.dim());
    else if (part == "full")
        partition = full_partition(grid.dim());
    else
        cfg.fail("kernel", "partition", "'partition' must be separable or full");
    try {
        KernelSpec spec = make_kernel(profile, sym, horizon, partition);
        for (std::size_t i = 0; i < spec.subinteractions(); ++i)
            build_stencil(spec, grid, i);
        return spec;
    } catch (const InvalidInput& e) {
        cfg.fail("kernel", cfg.has("kernel", "horizon") ? "horizon" : "horizon_cells", e.what());
    }
}

FluxPair make_flux(const Config& cfg, double lo, double hi, const std::string& default_type = "engquist_osher_burgers")
{
    cfg.allow_keys("flux", {"type", "speed", "local", "alpha", "range_lo", "range_hi"});
    Range range = certified_range(lo, hi);
    range.lo = cfg.get_double("flux", "range_lo", range.lo);
    range.hi = cfg.get_double("flux", "range_hi", range.hi);
    if (!(range.lo < range.hi))
        cfg.fail("flux", "range_lo", "flux range must satisfy range_lo < range_hi");
    const std::string type = cfg.get_string("flux", "type", default_type);
    try {
        if (type == "engquist_osher_burgers")
            return engquist_osher_burgers(range);
        if (type == "upwind_advection")
            return upwind_advection(cfg.get_double("flux", "speed", 1.0), range);
        if (type == "lax_friedrichs_split")
            return lax_friedrichs_split(cfg.get_string("flux", "local", "burgers"), cfg.get_double("flux", "alpha", -1.0),
                                        range, cfg.get_double("flux", "speed", 1.0));
        if (type == "zero")
            return zero_flux(range);
    } catch (const InvalidInput& e) {
        cfg.fail("flux", "type", e.what());
    }
    cfg.fail("flux", "type", "unknown flux type '" + type + "'");
}

GridField make_initial(const Config& cfg, const Grid& grid, const std::string& section = "initial")
{
    const std::string profile = cfg.get_string(section, "profile");
    try {
        return make_initial_data(grid, profile, cfg.numeric_section(section, {"profile"}));
    } catch (const InvalidInput& e) {
        cfg.fail(section, "profile", e.what());
    }
}

json describe(const Grid& grid, const KernelSpec& kernel, const FluxPair& flux, const OperatorAssembly& op)
{
    json cells = json::array(), extent = json::array();
    for (int a = 0; a < grid.dim(); ++a) {
        cells.push_back(grid.cells(a));
        extent.push_back(grid.extent(a));
    }
    return {{"grid", {{"cells", cells}, {"extent", extent}}},
            {"kernel",
             {{"profile", kernel.profile_name},
              {"symmetry", to_string(kernel.symmetry)},
              {"horizon", kernel.horizon},
              {"partition", kernel.partition}}},
            {"flux", {{"type", flux.name}, {"k1", flux.k1}, {"k2", flux.k2}, {"range", {flux.range.lo, flux.range.hi}}}},
            {"lipschitz_bound", op.lipschitz_bound()},
            {"cfl_constant", op.cfl_constant()}};
}

Problem build_problem(const Config& cfg, double range_margin = 0.0, Symmetry default_symmetry = Symmetry::even_symmetric)
{
    Problem p;
    p.grid = make_grid(cfg);
    p.kernel = make_kernel_spec(cfg, p.grid, default_symmetry);
    p.u0 = make_initial(cfg, p.grid);
    p.flux = make_flux(cfg, p.u0.min() - range_margin, p.u0.max() + range_margin);
    p.op.emplace(OperatorAssembly::from_kernel(p.grid, p.kernel, {p.flux}));
    p.description = describe(p.grid, p.kernel, p.flux, *p.op);
    return p;
}

ResolventOptions solve_options(const Config& cfg, const std::string& section)
{
    ResolventOptions o;
    o.tol_relative = cfg.get_double(section, "tol_relative", o.tol_relative);
    o.tol_residual = cfg.get_double(section, "tol_residual", o.tol_residual);
    o.max_iters = cfg.get_int(section, "max_iters", o.max_iters);
    try {
        o.method = parse_solve_method(cfg.get_string(section, "method", "auto"));
    } catch (const InvalidInput& e) {
        cfg.fail(section, "method", e.what());
    }
    if (!(o.tol_relative > 0.0) || o.max_iters < 1)
        cfg.fail(section, "tol_relative", "solver tolerances and max_iters must be positive");
    return o;
}

json config_echo(const Config& cfg)
{
    json echo = json::object();
    for (const auto& [section, entries] : cfg.sections()) {
        json s = json::object();
        for (const auto& [key, entry] : entries)
            s[key] = entry.value;
        echo[section] = s;
    }
    return echo;
}

json step_reports(const std::vector<SolveReport>& reports)
{
    json steps = json::array();
    for (std::size_t m = 0; m < reports.size(); ++m)
        steps.push_back({{"step", m + 1},
                         {"iterations", reports[m].iterations},
                         {"final_residual", reports[m].final_residual},
                         {"method", to_string(reports[m].method_used)}});
    return steps;
}

/// Collects the files of one invocation and writes the manifest last.
class Artifacts
{
public:
    explicit Artifacts(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    const fs::path& dir() const { return dir_; }

    void write(const std::string& name, const std::string& content)
    {
        write_file_atomic(dir_ / name, content);
        inventory_[name] = {{"sha256", sha256_hex(content)}, {"bytes", content.size()}};
    }

    /// Files written by other routines (trajectory dumps), hashed from disk.
    void adopt(const std::string& name)
    {
        const std::string content = read_file(dir_ / name);
        inventory_[name] = {{"sha256", sha256_hex(content)}, {"bytes", content.size()}};
    }

    void finish(json manifest, double seconds)
    {
        json files = json::array();
        for (const auto& [name, info] : inventory_)
            files.push_back({{"file", name}, {"sha256", info["sha256"]}, {"bytes", info["bytes"]}});
        manifest["artifacts"] = files;
        write_file_atomic(dir_ / "manifest.json", manifest.dump(2) + "\n");
        std::ostringstream t;
        t << std::setprecision(6) << "{\"wall_clock_seconds\": " << seconds << "}\n";
        write_file_atomic(dir_ / "timing.json", t.str());
    }

private:
    fs::path dir_;
    std::map<std::string, json> inventory_;
};

json base_manifest(const std::string& command, const Config& cfg)
{
    return {{"command", command}, {"library", {{"name", "nonloclaw"}, {"version", kVersion}}}, {"config", config_echo(cfg)}};
}

std::string plot_field_script(const std::vector<std::string>& files, const std::vector<double>& times, const Grid& grid)
{
    std::ostringstream s;
    s << "# gnuplot\nset datafile separator ','\n";
    s << "dx = " << format_double(grid.spacing(0)) << "\n";
    if (grid.dim() == 1) {
        s << "set xlabel 'x'\nset ylabel 'u'\nset key outside\nplot \\\n";
        for (std::size_t k = 0; k < files.size(); ++k)
            s << "  '" << files[k] << "' using (($1+0.5)*dx):2 with lines title 't = " << format_double(times[k]) << "'"
              << (k + 1 < files.size() ? ", \\\n" : "\n");
    } else {
        s << "dy = " << format_double(grid.spacing(1)) << "\n";
        s << "set view map\nset xlabel 'x'\nset ylabel 'y'\n";
        s << "splot '" << files.back() << "' using (($1+0.5)*dx):(($2+0.5)*dy):3 with points pointtype 5 "
          << "palette title 't = " << format_double(times.back()) << "'\n";
    }
    s << "pause mouse close\n";
    return s.str();
}

void write_trajectory_artifacts(Artifacts& art, const Trajectory& traj, const json& problem, const std::string& sub = "")
{
    const fs::path dir = sub.empty() ? art.dir() : art.dir() / sub;
    write_trajectory(traj, dir, problem);
    const std::string prefix = sub.empty() ? "" : sub + "/";
    for (std::size_t k = 0; k < traj.states.size(); ++k)
        art.adopt(prefix + snapshot_name(k));
    art.adopt(prefix + kTrajectoryManifest);
}

double config_step(const Config& cfg, double T, std::optional<double> fallback)
{
    if (cfg.has("scheme", "step") && cfg.has("scheme", "steps"))
        cfg.fail("scheme", "step", "give at most one of 'step' and 'steps'");
    if (cfg.has("scheme", "steps")) {
        const int n = cfg.get_int("scheme", "steps");
        if (n < 1)
            cfg.fail("scheme", "steps", "'steps' must be positive");
        return T / n;
    }
    const double step = cfg.get_double("scheme", "step", fallback);
    if (!(step > 0.0))
        cfg.fail("scheme", "step", "'step' must be positive");
    return step;
}

ForcingSpec make_forcing(const Config& cfg)
{
    const std::string kind = cfg.get_string("scheme", "forcing", "none");
    if (kind == "none")
        return {[](double, const GridField& u) { return GridField(u.grid()); }, 0.0, [](double) { return 0.0; }};
    if (kind == "constant") {
        const double v = cfg.get_double("scheme", "forcing_value", 1.0);
        return {[v](double, const GridField& u) { return GridField(u.grid(), v); }, 0.0,
                [](double) { return std::numeric_limits<double>::infinity(); }};
    }
    if (kind == "decay") {
        const double r = cfg.get_double("scheme", "forcing_rate", 1.0);
        return {[r](double, const GridField& u) { return -r * u; }, std::abs(r),
                [r](double) { return std::abs(r); }};
    }
    cfg.fail("scheme", "forcing", "unknown forcing '" + kind + "' (expected none, constant or decay)");
}

void apply_seed(Config& cfg, const AppOptions& opts)
{
    const std::string profile = cfg.get_string("initial", "profile", "");
    if (opts.seed && (profile == "random" || profile == "random_smooth"))
        cfg.set("initial", "seed", std::to_string(*opts.seed));
}

int cmd_run(const Config& cfg, const AppOptions& opts, std::ostream& out)
{
    const auto start = std::chrono::steady_clock::now();
    cfg.allow_keys("scheme", {"type", "T", "step", "steps", "cfl_fraction", "tol_relative", "tol_residual", "max_iters",
                              "method", "forcing", "forcing_value", "forcing_rate"});
    cfg.allow_keys("outputs", {"directory", "snapshot_every"});
    const Problem p = build_problem(cfg);
    Scheme scheme;
    try {
        scheme = parse_scheme(cfg.get_string("scheme", "type", "implicit"));
    } catch (const InvalidInput& e) {
        cfg.fail("scheme", "type", e.what());
    }
    const double T = cfg.get_double("scheme", "T");
    if (!(T > 0.0))
        cfg.fail("scheme", "T", "'T' must be positive");
    EvolveOptions ev;
    ev.solve = solve_options(cfg, "scheme");
    ev.snapshot_every = cfg.get_int("outputs", "snapshot_every", 1);
    if (ev.snapshot_every < 1)
        cfg.fail("outputs", "snapshot_every", "'snapshot_every' must be positive");

    Trajectory traj;
    double step = 0.0;
    if (scheme == Scheme::explicit_euler) {
        const double fraction = cfg.get_double("scheme", "cfl_fraction", 0.9);
        step = config_step(cfg, T, fraction / p.op->cfl_constant());
        if (step * p.op->cfl_constant() > 1.0 + 1e-12) {
            std::ostringstream msg;
            msg << "explicit step " << step << " violates the CFL bound; admissible step <= "
                << 1.0 / p.op->cfl_constant();
            cfg.fail("scheme", cfg.has("scheme", "steps") ? "steps" : "step", msg.str());
        }
        traj = evolve_explicit(*p.op, p.u0, T, step, ev);
    } else {
        step = config_step(cfg, T, std::nullopt);
        if (scheme == Scheme::implicit_euler)
            traj = evolve_implicit(*p.op, p.u0, T, step, ev);
        else
            traj = evolve_forced(*p.op, p.u0, T, step, make_forcing(cfg), ev);
    }

    Artifacts art(output_directory(opts, cfg.get_string("outputs", "directory", "")));
    json problem = p.description;
    problem["scheme"] = {{"type", to_string(scheme)}, {"T", T}, {"step", step}};
    write_trajectory_artifacts(art, traj, problem);
    std::vector<std::string> files;
    std::vector<double> times;
    const std::size_t n = traj.states.size();
    for (std::size_t k : {std::size_t{0}, n / 4, n / 2, (3 * n) / 4, n - 1}) {
        if (!files.empty() && files.back() == snapshot_name(k))
            continue;
        files.push_back(snapshot_name(k));
        times.push_back(traj.times[k]);
    }
    art.write("plot.gp", plot_field_script(files, times, p.grid));

    json m = base_manifest("run", cfg);
    m["problem"] = problem;
    m["solver"] = {{"residual_budget", traj.residual_budget}, {"steps", step_reports(traj.reports)}};
    m["result"] = {{"snapshots", n},
                   {"final_time", traj.final_time()},
                   {"final_mass", traj.final_state().mass()},
                   {"final_min", traj.final_state().min()},
                   {"final_max", traj.final_state().max()}};
    art.finish(m, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    out << "run: " << n << " snapshots to t = " << traj.final_time() << ", residual budget " << traj.residual_budget
        << ", written to " << art.dir().string() << "\n";
    return exit_ok;
}

int cmd_verify(const Config& cfg, const AppOptions& opts, std::ostream& out, std::ostream& err)
{
    const auto start = std::chrono::steady_clock::now();
    cfg.allow_keys("scheme", {"type", "T", "step", "steps", "tol_relative", "tol_residual", "max_iters", "method",
                              "cfl_fraction", "forcing", "forcing_value", "forcing_rate"});
    cfg.allow_keys("outputs", {"directory", "snapshot_every"});
    cfg.allow_keys("verify", {"pairs", "perturbation", "seed", "bumps_space", "bumps_time", "c_samples", "tol",
                              "entropy_tol", "trajectory"});
    const double perturbation = cfg.get_double("verify", "perturbation", 0.25);
    if (!(perturbation >= 0.0))
        cfg.fail("verify", "perturbation", "'perturbation' must be nonnegative");
    const Problem p = build_problem(cfg, perturbation);
    const double T = cfg.get_double("scheme", "T");
    if (!(T > 0.0))
        cfg.fail("scheme", "T", "'T' must be positive");
    const double eps = config_step(cfg, T, std::nullopt);
    EvolveOptions ev;
    ev.solve = solve_options(cfg, "scheme");
    if (!cfg.has("scheme", "tol_relative"))
        ev.solve.tol_relative = 1e-12;

    const int pairs = cfg.get_int("verify", "pairs", 2);
    const int seed = cfg.get_int("verify", "seed", 1);
    if (pairs < 0 || seed < 0)
        cfg.fail("verify", "pairs", "'pairs' and 'seed' must be nonnegative");
    std::vector<TheoremCase> cases;
    cases.push_back({p.u0, p.u0, T, eps});
    for (int k = 0; k < pairs; ++k) {
        const GridField bump = random_data(p.grid, static_cast<std::uint64_t>(seed) + k, 0.0, perturbation);
        cases.push_back({p.u0, k % 2 == 0 ? p.u0 + bump : p.u0 - bump, T, eps});
    }
    TheoremSuiteOptions topts;
    topts.tol = cfg.get_double("verify", "tol", topts.tol);
    topts.solve = ev.solve;
    const PropertyReport props = theorem_suite(*p.op, cases, topts);

    Trajectory traj;
    Artifacts art(output_directory(opts, cfg.get_string("outputs", "directory", "")));
    json problem = p.description;
    problem["scheme"] = {{"type", "implicit"}, {"T", T}, {"step", eps}};
    if (cfg.has("verify", "trajectory")) {
        fs::path src = cfg.get_string("verify", "trajectory");
        if (src.is_relative())
            src = cfg.source() == "<config>" ? src : fs::path(cfg.source()).parent_path() / src;
        try {
            traj = read_trajectory(src);
        } catch (const InvalidInput& e) {
            cfg.fail("verify", "trajectory", e.what());
        }
        if (!(traj.states.front().grid() == p.grid))
            cfg.fail("verify", "trajectory", "trajectory grid differs from [grid]");
    } else {
        traj = evolve_implicit(*p.op, p.u0, T, eps, ev);
        write_trajectory_artifacts(art, traj, problem, "trajectory");
    }
    const auto family = TestFunctionFamily::tensor_grid(p.grid, traj.final_time(), cfg.get_int("verify", "bumps_space", 5),
                                                        cfg.get_int("verify", "bumps_time", 5));
    EntropyAuditOptions eopts;
    eopts.tolerance = cfg.get_double("verify", "entropy_tol", 0.0);
    const EntropyReport entropy = entropy_audit(traj, *p.op, family, cfg.get_int("verify", "c_samples", 9), eopts);

    std::ostringstream report, csv;
    write_property_report(report, props);
    report << (entropy.passed ? "PASS " : "FAIL ") << "(vi) entropy inequality min_residual="
           << format_double(entropy.min_residual) << " tolerance=" << format_double(entropy.tolerance) << '\n';
    write_entropy_csv(csv, entropy, family);
    art.write("property_report.txt", report.str());
    art.write("entropy_report.csv", csv.str());

    json checks = json::array();
    for (const auto& c : props.checks)
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"worst_excess", c.worst_excess}, {"tolerance", c.tolerance}});
    json m = base_manifest("verify", cfg);
    m["problem"] = problem;
    m["solver"] = {{"residual_budget", traj.residual_budget}, {"steps", step_reports(traj.reports)}};
    m["result"] = {{"properties", checks},
                   {"entropy",
                    {{"passed", entropy.passed},
                     {"min_residual", entropy.min_residual},
                     {"sentinel_max_abs", entropy.sentinel_max_abs},
                     {"tolerance", entropy.tolerance}}},
                   {"passed", props.passed && entropy.passed}};
    art.finish(m, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());

    out << report.str();
    if (props.passed && entropy.passed) {
        out << "verify: all properties hold, reports in " << art.dir().string() << "\n";
        return exit_ok;
    }
    for (const auto& c : props.checks)
        if (!c.passed)
            err << "property " << c.name << " failed: excess " << c.worst_excess << " > tolerance " << c.tolerance << "\n";
    if (!entropy.passed) {
        const EntropyEntry& w = entropy.entries[entropy.worst];
        err << "entropy inequality failed: residual " << entropy.min_residual << " for bump " << w.member << ", c = " << w.c
            << " (tolerance " << entropy.tolerance << ")\n";
    }
    return exit_property_failure;
}

ReferenceSolution study_oracle(const Config& cfg, const Grid& grid)
{
    const std::string oracle = cfg.get_string("study", "oracle");
    const double L = grid.extent(0);
    if (oracle == "burgers_shock")
        return burgers_riemann(cfg.get_double("study", "u_left", 1.0), cfg.get_double("study", "u_right", 0.0),
                               cfg.get_double("study", "jump", 0.5), L);
    if (oracle == "burgers_rarefaction")
        return burgers_riemann(cfg.get_double("study", "u_left", -1.0), cfg.get_double("study", "u_right", 1.0),
                               cfg.get_double("study", "jump", 0.5), L);
    if (oracle == "linear_advection") {
        const double c = cfg.get_double("study", "center", 0.3) * L;
        const double w = cfg.get_double("study", "width", 0.05) * L;
        if (!(w > 0.0))
            cfg.fail("study", "width", "'width' must be positive");
        return linear_advection(cfg.get_double("study", "speed", 1.0),
                                [c, w](double x) { return std::exp(-(x - c) * (x - c) / (2 * w * w)); }, L);
    }
    cfg.fail("study", "oracle", "unknown oracle '" + oracle + "' (expected burgers_shock, burgers_rarefaction or linear_advection)");
}

int cmd_study(const Config& cfg, const AppOptions& opts, std::ostream& out)
{
    const auto start = std::chrono::steady_clock::now();
    cfg.allow_keys("study", {"oracle", "deltas", "T", "u_left", "u_right", "jump", "speed", "center", "width",
                             "cfl_fraction", "subsamples"});
    cfg.allow_keys("outputs", {"directory"});
    const Grid grid = make_grid(cfg);
    if (grid.dim() != 1)
        cfg.fail("grid", "cells", "the local-limit study needs a 1D grid");
    const ReferenceSolution ref = study_oracle(cfg, grid);
    const double T = cfg.get_double("study", "T");
    std::vector<double> deltas;
    for (int d : int_list(cfg, "study", "deltas"))
        deltas.push_back(d * grid.spacing(0));

    const bool advection = ref.name == "linear_advection";
    const GridField u0 = cell_averages(ref, grid, 0.0);
    FluxPair flux;
    if (!cfg.has("flux", "type") && advection) {
        Config with = cfg;
        with.set("flux", "type", "upwind_advection");
        if (!cfg.has("flux", "speed"))
            with.set("flux", "speed", format_double(cfg.get_double("study", "speed", 1.0)));
        flux = make_flux(with, u0.min(), u0.max());
    } else {
        flux = make_flux(cfg, u0.min(), u0.max());
    }
    cfg.allow_keys("kernel", {"profile", "symmetry"});
    Symmetry sym = Symmetry::one_sided;
    try {
        if (cfg.has("kernel", "symmetry"))
            sym = parse_symmetry(cfg.get_string("kernel", "symmetry"));
    } catch (const InvalidInput& e) {
        cfg.fail("kernel", "symmetry", e.what());
    }
    LocalLimitOptions lopts;
    lopts.symmetry = sym;
    lopts.cfl_fraction = cfg.get_double("study", "cfl_fraction", lopts.cfl_fraction);
    lopts.subsamples = cfg.get_int("study", "subsamples", lopts.subsamples);
    LocalLimitTable table;
    try {
        table = local_limit_study(flux, cfg.get_string("kernel", "profile", "constant"), ref, T, deltas, grid, lopts);
    } catch (const InvalidInput& e) {
        cfg.fail("study", "deltas", e.what());
    }

    std::ostringstream csv;
    csv << "delta,delta_cells,l1_error,order\n";
    for (const auto& r : table.rows)
        csv << format_double(r.delta) << ',' << r.delta_cells << ',' << format_double(r.error) << ','
            << (std::isnan(r.order) ? std::string("nan") : format_double(r.order)) << '\n';
    csv << "# baseline local_upwind cells=" << table.baseline_cells << " l1_error=" << format_double(table.baseline_error)
        << "\n# baseline local_upwind_same_grid cells=" << grid.cells(0)
        << " l1_error=" << format_double(table.same_grid_baseline_error) << '\n';
    std::ostringstream gp;
    gp << "# gnuplot\nset datafile separator ','\nset logscale xy\nset xlabel 'delta'\nset ylabel 'L1 error'\n"
       << "plot 'study.csv' every ::1 using 1:3 with linespoints title '" << ref.name << "', \\\n  "
       << format_double(table.baseline_error) << " with lines dashtype 2 title 'local upwind baseline'\n"
       << "pause mouse close\n";

    Artifacts art(output_directory(opts, cfg.get_string("outputs", "directory", "")));
    art.write("study.csv", csv.str());
    art.write("study.gp", gp.str());
    json rows = json::array();
    for (const auto& r : table.rows)
        rows.push_back({{"delta", r.delta}, {"delta_cells", r.delta_cells}, {"l1_error", r.error}});
    json m = base_manifest("study", cfg);
    m["problem"] = {{"oracle", ref.name},
                    {"T", T},
                    {"cells", grid.cells(0)},
                    {"flux", flux.name},
                    {"symmetry", to_string(sym)},
                    {"cfl_fraction", lopts.cfl_fraction}};
    m["result"] = {{"rows", rows},
                   {"errors_decrease", table.errors_decrease()},
                   {"baseline_cells", table.baseline_cells},
                   {"baseline_error", table.baseline_error},
                   {"same_grid_baseline_error", table.same_grid_baseline_error}};
    art.finish(m, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    out << csv.str();
    return exit_ok;
}

int cmd_resolvent(const Config& cfg, const AppOptions& opts, std::ostream& out)
{
    const auto start = std::chrono::steady_clock::now();
    cfg.allow_keys("resolvent", {"lambda", "eps", "tol_relative", "tol_residual", "max_iters", "method"});
    cfg.allow_keys("outputs", {"directory"});
    const Problem p = build_problem(cfg);
    const double lambda = cfg.get_double("resolvent", "lambda");
    const double eps = cfg.get_double("resolvent", "eps", 0.0);
    if (!(eps >= 0.0))
        cfg.fail("resolvent", "eps", "'eps' must be nonnegative");
    if (!(lambda > 0.0) && !(eps > 0.0 && lambda == 0.0))
        cfg.fail("resolvent", "lambda", "'lambda' must be positive");
    const ResolventOptions so = solve_options(cfg, "resolvent");
    const SolveResult res = eps > 0.0 ? solve_regularized(*p.op, p.u0, lambda, eps, so) : solve_resolvent(*p.op, p.u0, lambda, so);

    std::ostringstream csv;
    write_field_csv(csv, res.solution);
    Artifacts art(output_directory(opts, cfg.get_string("outputs", "directory", "")));
    art.write("solution.csv", csv.str());
    art.write("plot.gp", plot_field_script({"solution.csv"}, {0.0}, p.grid));
    json m = base_manifest("resolvent", cfg);
    m["problem"] = p.description;
    m["problem"]["lambda"] = lambda;
    m["problem"]["eps"] = eps;
    m["solver"] = {{"iterations", res.report.iterations},
                   {"final_residual", res.report.final_residual},
                   {"tol_residual", res.report.tol_residual},
                   {"method", to_string(res.report.method_used)},
                   {"contraction_estimate", res.report.contraction_estimate},
                   {"residual_history", res.report.residual_history}};
    art.finish(m, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    out << "resolvent: " << res.report.iterations << " iterations (" << to_string(res.report.method_used)
        << "), residual " << res.report.final_residual << ", written to " << art.dir().string() << "\n";
    return exit_ok;
}

}  // namespace

fs::path output_directory(const AppOptions& opts, const std::string& configured)
{
    if (opts.out)
        return *opts.out;
    const char* env = std::getenv("NONLOCLAW_OUT");
    const fs::path root = env && *env ? fs::path(env) : fs::path("out");
    if (!configured.empty()) {
        const fs::path c(configured);
        if (c.is_absolute() || !(env && *env))
            return c;
        return root / c;
    }
    return root / opts.config.stem();
}

int run_app(const std::string& command, const AppOptions& opts, std::ostream& out, std::ostream& err)
{
    try {
        if (opts.threads < 1)
            throw ConfigError("--threads must be at least 1");
        set_thread_count(opts.threads);
        Config cfg = Config::load(opts.config);
        cfg.allow_sections(kSections);
        apply_seed(cfg, opts);
        if (command == "run")
            return cmd_run(cfg, opts, out);
        if (command == "verify")
            return cmd_verify(cfg, opts, out, err);
        if (command == "study")
            return cmd_study(cfg, opts, out);
        if (command == "resolvent")
            return cmd_resolvent(cfg, opts, out);
        throw ConfigError("unknown command '" + command + "'");
    } catch (const PropertyFailure& e) {
        err << "error: " << e.what() << "\n";
        return exit_property_failure;
    } catch (const StepFailure& e) {
        err << "solver failure: " << e.what() << "\n";
        return exit_solver_failure;
    } catch (const SolverDivergence& e) {
        err << "solver failure: " << e.what() << "\n";
        return exit_solver_failure;
    } catch (const NonFiniteValue& e) {
        err << "solver failure: " << e.what() << "\n";
        return exit_solver_failure;
    } catch (const InvalidInput& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return exit_solver_failure;
    }
}

}  // namespace nonloclaw
