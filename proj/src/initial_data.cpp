#include "nonloclaw/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <set>

namespace nonloclaw {

namespace {

double unit_double(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double periodic_distance(double x, double c, double extent)
{
    double d = std::fmod(std::abs(x - c), extent);
    return std::min(d, extent - d);
}

template <class F>
GridField tabulate(const Grid& grid, F f)
{
    GridField u(grid);
    for (std::size_t x = 0; x < u.size(); ++x) {
        const Index idx = grid.unravel(x);
        double pos[kMaxDim] = {0.0, 0.0};
        for (int a = 0; a < grid.dim(); ++a)
            pos[a] = grid.center(a, idx[a]);
        u[x] = f(pos);
    }
    u.check_finite("initial data");
    return u;
}

std::uint64_t seed_of(double v)
{
    if (!(v >= 0.0) || v != std::floor(v) || v > 9.007199254740992e15)
        throw InvalidInput("seed must be a nonnegative integer");
    return static_cast<std::uint64_t>(v);
}

}  // namespace

GridField constant_data(const Grid& grid, double value)
{
    if (!std::isfinite(value))
        throw InvalidInput("constant value must be finite");
    return GridField(grid, value);
}

GridField riemann_data(const Grid& grid, double u_left, double u_right, double jump)
{
    const double x0 = jump * grid.extent(0);
    return tabulate(grid, [&](const double* p) { return p[0] < x0 ? u_left : u_right; });
}

GridField gaussian_data(const Grid& grid, double center, double width, double amplitude, double base)
{
    if (!(width > 0.0))
        throw InvalidInput("gaussian width must be positive");
    return tabulate(grid, [&](const double* p) {
        double r2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) {
            const double d = periodic_distance(p[a], center * grid.extent(a), grid.extent(a));
            r2 += d * d;
        }
        return base + amplitude * std::exp(-r2 / (2.0 * width * width));
    });
}

GridField indicator_data(const Grid& grid, double lo, double hi, double value, double base)
{
    if (!(lo < hi))
        throw InvalidInput("indicator needs lo < hi");
    return tabulate(grid, [&](const double* p) {
        for (int a = 0; a < grid.dim(); ++a)
            if (p[a] < lo * grid.extent(a) || p[a] >= hi * grid.extent(a))
                return base;
        return value;
    });
}

GridField random_data(const Grid& grid, std::uint64_t seed, double lo, double hi)
{
    if (!(lo <= hi))
        throw InvalidInput("random data needs lo <= hi");
    std::mt19937_64 rng(seed);
    GridField u(grid);
    for (std::size_t x = 0; x < u.size(); ++x)
        u[x] = lo + (hi - lo) * unit_double(rng);
    return u;
}

GridField random_smooth_data(const Grid& grid, std::uint64_t seed, double amplitude, int modes)
{
    if (modes < 1)
        throw InvalidInput("random_smooth needs at least one mode");
    std::mt19937_64 rng(seed);
    struct Mode {
        int k[kMaxDim];
        double amp, phase;
    };
    std::vector<Mode> ms;
    for (int j = 0; j < modes; ++j) {
        Mode m{{0, 0}, 0.0, 0.0};
        for (int a = 0; a < grid.dim(); ++a)
            m.k[a] = 1 + static_cast<int>(unit_double(rng) * 3.0);
        m.amp = 2.0 * unit_double(rng) - 1.0;
        m.phase = 2.0 * std::numbers::pi * unit_double(rng);
        ms.push_back(m);
    }
    double total = 0.0;
    for (const Mode& m : ms)
        total += std::abs(m.amp);
    const double scale = total > 0.0 ? amplitude / total : 0.0;
    return tabulate(grid, [&](const double* p) {
        double v = 0.0;
        for (const Mode& m : ms) {
            double arg = m.phase;
            for (int a = 0; a < grid.dim(); ++a)
                arg += 2.0 * std::numbers::pi * m.k[a] * p[a] / grid.extent(a);
            v += m.amp * std::sin(arg);
        }
        return scale * v;
    });
}

GridField make_initial_data(const Grid& grid, const std::string& profile, const std::map<std::string, double>& params)
{
    std::set<std::string> used;
    auto get = [&](const std::string& key, std::optional<double> fallback) {
        used.insert(key);
        if (auto it = params.find(key); it != params.end())
            return it->second;
        if (!fallback)
            throw InvalidInput("initial profile '" + profile + "' needs '" + key + "'");
        return *fallback;
    };
    GridField u(grid);
    if (profile == "constant") {
        u = constant_data(grid, get("value", std::nullopt));
    } else if (profile == "riemann") {
        u = riemann_data(grid, get("u_left", 1.0), get("u_right", 0.0), get("jump", 0.5));
    } else if (profile == "gaussian") {
        u = gaussian_data(grid, get("center", 0.5), get("width", 0.1 * grid.extent(0)), get("amplitude", 1.0),
                          get("base", 0.0));
    } else if (profile == "indicator") {
        u = indicator_data(grid, get("lo", 0.25), get("hi", 0.75), get("value", 1.0), get("base", 0.0));
    } else if (profile == "random") {
        const std::uint64_t seed = seed_of(get("seed", std::nullopt));
        u = random_data(grid, seed, get("lo", -1.0), get("hi", 1.0));
    } else if (profile == "random_smooth") {
        const std::uint64_t seed = seed_of(get("seed", std::nullopt));
        const double modes = get("modes", 4.0);
        if (modes != std::floor(modes))
            throw InvalidInput("random_smooth modes must be an integer");
        u = random_smooth_data(grid, seed, get("amplitude", 1.0), static_cast<int>(modes));
    } else {
        throw InvalidInput("unknown initial profile '" + profile + "'");
    }
    for (const auto& [key, value] : params)
        if (!used.contains(key))
            throw InvalidInput("initial profile '" + profile + "' has no parameter '" + key + "'");
    return u;
}

}  // namespace nonloclaw
