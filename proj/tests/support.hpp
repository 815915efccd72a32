#ifndef NONLOCLAW_TESTS_SUPPORT_HPP
#define NONLOCLAW_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>

#include "nonloclaw/grid.hpp"

namespace testing {

inline nonloclaw::GridField random_field(const nonloclaw::Grid& grid, std::mt19937_64& rng, double lo = -1.0,
                                         double hi = 1.0)
{
    std::uniform_real_distribution<double> dist(lo, hi);
    nonloclaw::GridField u(grid);
    for (std::size_t x = 0; x < u.size(); ++x)
        u[x] = dist(rng);
    return u;
}

/// Sum of a few random Fourier modes, bounded by `amplitude`.
inline nonloclaw::GridField smooth_field(const nonloclaw::Grid& grid, std::mt19937_64& rng, double amplitude = 1.0,
                                         int modes = 4)
{
    std::uniform_real_distribution<double> coef(-1.0, 1.0), phase(0.0, 2.0 * M_PI);
    nonloclaw::GridField u(grid);
    for (int m = 1; m <= modes; ++m) {
        const double a = coef(rng) * amplitude / modes;
        const double p = phase(rng);
        const int kx = m;
        const int ky = grid.dim() > 1 ? (m % 3) : 0;
        for (std::size_t x = 0; x < u.size(); ++x) {
            const auto idx = grid.unravel(x);
            double arg = 2.0 * M_PI * kx * (idx[0] + 0.5) / grid.cells(0) + p;
            if (grid.dim() > 1)
                arg += 2.0 * M_PI * ky * (idx[1] + 0.5) / grid.cells(1);
            u[x] += a * std::sin(arg);
        }
    }
    return u;
}

inline nonloclaw::GridField field_of(const nonloclaw::Grid& grid, std::vector<double> v)
{
    return nonloclaw::GridField(grid, std::move(v));
}

}  // namespace testing

#endif
