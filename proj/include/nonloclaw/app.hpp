#ifndef NONLOCLAW_APP_HPP
#define NONLOCLAW_APP_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace nonloclaw {

inline constexpr const char* kVersion = "0.1.0";

/// Exit statuses of the command-line front end.
enum ExitCode : int {
    exit_ok = 0,
    exit_property_failure = 1,
    exit_config_error = 2,
    exit_solver_failure = 3,
};

struct AppOptions {
    std::filesystem::path config;
    /// Output directory; otherwise [outputs] directory, resolved under
    /// $NONLOCLAW_OUT when set, else <root>/<config stem>.
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    int threads = 1;
};

/// Runs one subcommand ("run", "verify", "study", "resolvent") and maps
/// errors to exit codes: config or input errors 2, solver failures 3,
/// property failures 1. Progress goes to `out`, diagnostics to `err`.
int run_app(const std::string& command, const AppOptions& opts, std::ostream& out, std::ostream& err);

/// Directory the command would write to.
std::filesystem::path output_directory(const AppOptions& opts, const std::string& configured);

}  // namespace nonloclaw

#endif
