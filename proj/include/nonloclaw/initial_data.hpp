#ifndef NONLOCLAW_INITIAL_DATA_HPP
#define NONLOCLAW_INITIAL_DATA_HPP

#include <cstdint>
#include <map>
#include <string>

#include "nonloclaw/grid.hpp"

namespace nonloclaw {

// Positions are fractions of the extent along each axis; values are sampled
// at cell centers.

GridField constant_data(const Grid& grid, double value);

/// u_left below the jump on axis 0, u_right above it.
GridField riemann_data(const Grid& grid, double u_left, double u_right, double jump = 0.5);

/// base + amplitude·exp(-r²/(2 width²)), r the periodic distance to the center.
GridField gaussian_data(const Grid& grid, double center, double width, double amplitude, double base = 0.0);

/// value inside [lo, hi) on every axis, base elsewhere.
GridField indicator_data(const Grid& grid, double lo, double hi, double value, double base = 0.0);

/// Independent uniform values in [lo, hi). The generator is a fixed
/// mt19937_64 mapped to doubles by hand, so results do not depend on the
/// standard library.
GridField random_data(const Grid& grid, std::uint64_t seed, double lo, double hi);

/// Sum of `modes` periodic sine modes with random amplitudes and phases,
/// scaled so that max |u| ≤ amplitude.
GridField random_smooth_data(const Grid& grid, std::uint64_t seed, double amplitude, int modes = 4);

/// Builds a named profile ("constant", "riemann", "gaussian", "indicator",
/// "random", "random_smooth") from key/value parameters. Random profiles
/// require "seed". Unknown names or keys throw InvalidInput.
GridField make_initial_data(const Grid& grid, const std::string& profile,
                            const std::map<std::string, double>& params);

}  // namespace nonloclaw

#endif
