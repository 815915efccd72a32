#include "nonloclaw/trajectory_io.hpp"

#include <cstdio>
#include <sstream>

#include "nonloclaw/field_io.hpp"

namespace nonloclaw {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json grid_json(const Grid& g)
{
    json cells = json::array(), spacing = json::array();
    for (int a = 0; a < g.dim(); ++a) {
        cells.push_back(g.cells(a));
        spacing.push_back(g.spacing(a));
    }
    return {{"cells", cells}, {"spacing", spacing}};
}

json load_manifest(const fs::path& dir)
{
    const fs::path path = dir / kTrajectoryManifest;
    if (!fs::exists(path))
        throw InvalidInput("no trajectory manifest at " + path.string());
    try {
        return json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

}  // namespace

std::string snapshot_name(std::size_t k)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "snapshot_%05zu.csv", k);
    return buf;
}

json write_trajectory(const Trajectory& traj, const fs::path& dir, const json& problem)
{
    if (traj.states.empty() || traj.states.size() != traj.times.size())
        throw InvalidInput("write_trajectory: trajectory has no states or mismatched times");
    fs::create_directories(dir);
    json snaps = json::array();
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        std::ostringstream csv;
        write_field_csv(csv, traj.states[k]);
        const std::string name = snapshot_name(k);
        write_file_atomic(dir / name, csv.str());
        snaps.push_back({{"time", traj.times[k]}, {"file", name}, {"sha256", sha256_hex(csv.str())}});
    }
    json steps = json::array();
    for (const SolveReport& r : traj.reports)
        steps.push_back({{"iterations", r.iterations},
                         {"final_residual", r.final_residual},
                         {"tol_residual", r.tol_residual},
                         {"method", to_string(r.method_used)}});
    json m = {{"format", "nonloclaw-trajectory"},
              {"version", 1},
              {"scheme", to_string(traj.scheme)},
              {"step", traj.step},
              {"grid", grid_json(traj.states.front().grid())},
              {"problem", problem},
              {"residual_budget", traj.residual_budget},
              {"steps", steps},
              {"snapshots", snaps}};
    write_file_atomic(dir / kTrajectoryManifest, m.dump(2) + "\n");
    return m;
}

Trajectory read_trajectory(const fs::path& dir)
{
    const json m = load_manifest(dir);
    Trajectory traj;
    try {
        if (m.at("format") != "nonloclaw-trajectory")
            throw InvalidInput("not a trajectory manifest");
        traj.scheme = parse_scheme(m.at("scheme").get<std::string>());
        traj.step = m.at("step").get<double>();
        traj.residual_budget = m.value("residual_budget", 0.0);
        for (const auto& s : m.value("steps", json::array())) {
            SolveReport r;
            r.iterations = s.at("iterations").get<int>();
            r.final_residual = s.at("final_residual").get<double>();
            r.tol_residual = s.value("tol_residual", 0.0);
            r.method_used = parse_solve_method(s.value("method", std::string("auto")));
            traj.reports.push_back(r);
        }
        for (const auto& s : m.at("snapshots")) {
            const fs::path file = dir / s.at("file").get<std::string>();
            if (!fs::exists(file))
                throw InvalidInput("missing snapshot " + file.string());
            const std::string bytes = read_file(file);
            if (s.contains("sha256") && s.at("sha256").get<std::string>() != sha256_hex(bytes))
                throw InvalidInput("hash mismatch for " + file.string());
            std::istringstream in(bytes);
            GridField u = read_field_csv(in);
            if (!traj.states.empty() && !(u.grid() == traj.states.front().grid()))
                throw InvalidInput("snapshot " + file.string() + " is on a different grid");
            traj.times.push_back(s.at("time").get<double>());
            traj.states.push_back(std::move(u));
        }
    } catch (const json::exception& e) {
        throw InvalidInput((dir / kTrajectoryManifest).string() + ": " + e.what());
    }
    if (traj.states.empty())
        throw InvalidInput("trajectory has no snapshots");
    for (std::size_t k = 1; k < traj.times.size(); ++k)
        if (!(traj.times[k] > traj.times[k - 1]))
            throw InvalidInput("trajectory times must increase");
    return traj;
}

json read_trajectory_problem(const fs::path& dir)
{
    return load_manifest(dir).value("problem", json::object());
}

}  // namespace nonloclaw
