#ifndef NONLOCLAW_TRAJECTORY_IO_HPP
#define NONLOCLAW_TRAJECTORY_IO_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "nonloclaw/semigroup.hpp"

namespace nonloclaw {

inline constexpr const char* kTrajectoryManifest = "trajectory.json";

/// File name of snapshot k, "snapshot_00000.csv" style.
std::string snapshot_name(std::size_t k);

/// Writes every snapshot as a field CSV into `dir` followed by a JSON manifest
/// listing grid, scheme, step, times, per-step solver reports, the residual
/// budget, `problem` (kernel, flux, ... as the caller describes them) and the
/// SHA-256 of each CSV. All files are written atomically. Returns the manifest.
nlohmann::json write_trajectory(const Trajectory& traj, const std::filesystem::path& dir,
                                const nlohmann::json& problem = nlohmann::json::object());

/// Reads a directory written by write_trajectory (or produced elsewhere in
/// the same format). Hash mismatches, missing files and grids that differ
/// between snapshots throw InvalidInput.
Trajectory read_trajectory(const std::filesystem::path& dir);

/// The "problem" object of a trajectory manifest.
nlohmann::json read_trajectory_problem(const std::filesystem::path& dir);

}  // namespace nonloclaw

#endif
