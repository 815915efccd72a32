#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "nonloclaw/nonlocal_operator.hpp"
#include "support.hpp"

using namespace nonloclaw;

namespace {

OperatorAssembly upwind_single_shift(int n, double extent, double speed = 1.0)
{
    const Grid g = Grid::line(n, extent);
    const auto spec = make_kernel("constant", Symmetry::one_sided, {g.spacing(0)}, {{0}});
    return OperatorAssembly::from_kernel(g, spec, {upwind_advection(speed, {-10, 10})});
}

std::vector<OperatorAssembly> assorted_operators()
{
    std::vector<OperatorAssembly> ops;
    const Range r{-2.0, 2.0};
    const Grid g1 = Grid::line(64, 1.0);
    ops.push_back(OperatorAssembly::from_kernel(
        g1, make_kernel("triangle", Symmetry::even_symmetric, {4.0 / 64}, {{0}}), {engquist_osher_burgers(r)}));
    ops.push_back(OperatorAssembly::from_kernel(
        g1, make_kernel("constant", Symmetry::one_sided, {3.0 / 64}, {{0}}), {lax_friedrichs_split("burgers", -1, r)}));
    const Grid g2 = Grid::plane(16, 12, 1.0, 0.75);
    ops.push_back(OperatorAssembly::from_kernel(
        g2, make_kernel("constant", Symmetry::even_symmetric, {2.0 / 16, 2.0 / 16}, full_partition(2)),
        {engquist_osher_burgers(r)}));
    ops.push_back(OperatorAssembly::from_kernel(
        g2, make_kernel("truncated_quadratic", Symmetry::one_sided, {3.0 / 16, 2.0 / 16}, separable_partition(2)),
        {engquist_osher_burgers(r), upwind_advection(0.5, r)}));
    return ops;
}

}  // namespace

TEST_CASE("constant states are steady")
{
    for (const auto& op : assorted_operators())
        for (double c : {-1.3, 0.0, 0.25, 1.9})
            CHECK(apply_B(op, GridField(op.grid(), c)) == GridField(op.grid(), 0.0));
}

TEST_CASE("single-shift upwind operator is the classical upwind difference")
{
    const auto op = upwind_single_shift(4, 4.0);
    const auto bu = apply_B(op, testing::field_of(op.grid(), {0, 1, 0, 0}));
    CHECK(bu == testing::field_of(op.grid(), {0, 1, -1, 0}));
    CHECK(op.lipschitz_bound() == doctest::Approx(2.0));
    CHECK(lipschitz_bound(op) == op.lipschitz_bound());
}

TEST_CASE("zero flux has a zero Lipschitz bound")
{
    const Grid g = Grid::line(16, 1.0);
    const auto op = OperatorAssembly::from_kernel(g, make_kernel("constant", Symmetry::even_symmetric, {0.125}, {{0}}),
                                                  {zero_flux({-1, 1})});
    CHECK(op.lipschitz_bound() == 0.0);
}

TEST_CASE("discrete mass neutrality")
{
    std::mt19937_64 rng(1);
    for (const auto& op : assorted_operators()) {
        for (int t = 0; t < 20; ++t) {
            const GridField u = testing::random_field(op.grid(), rng, -2.0, 2.0);
            CHECK(std::abs(apply_B(op, u).mass()) <= 1e-12 * std::max(1.0, l1_norm(u)));
        }
    }
}

TEST_CASE("L1 Lipschitz estimate on random pairs")
{
    std::mt19937_64 rng(2);
    const Range r{-2.0, 2.0};
    const Grid g = Grid::line(64, 1.0);
    const auto op = OperatorAssembly::from_kernel(g, make_kernel("triangle", Symmetry::even_symmetric, {4.0 / 64}, {{0}}),
                                                  {engquist_osher_burgers(r)});
    for (int t = 0; t < 100; ++t) {
        const GridField u = testing::random_field(g, rng, -2.0, 2.0);
        const GridField v = testing::random_field(g, rng, -2.0, 2.0);
        const double lhs = l1_distance(apply_B(op, u), apply_B(op, v));
        CHECK(lhs <= op.lipschitz_bound() * l1_distance(u, v) * (1.0 + 1e-10));
    }
    for (const auto& other : assorted_operators()) {
        for (int t = 0; t < 20; ++t) {
            const GridField u = testing::random_field(other.grid(), rng, -2.0, 2.0);
            const GridField v = testing::random_field(other.grid(), rng, -2.0, 2.0);
            CHECK(l1_distance(apply_B(other, u), apply_B(other, v)) <=
                  other.lipschitz_bound() * l1_distance(u, v) * (1.0 + 1e-10));
        }
    }
}

TEST_CASE("weak form identity by summation by parts")
{
    std::mt19937_64 rng(3);
    for (const auto& op : assorted_operators()) {
        for (int t = 0; t < 25; ++t) {
            const GridField u = testing::random_field(op.grid(), rng, -2.0, 2.0);
            const GridField f = testing::random_field(op.grid(), rng, 0.0, 1.0);
            CHECK(std::abs(inner(f, apply_B(op, u)) - weak_form(op, u, f)) <= 1e-12);
        }
    }
}

TEST_CASE("explicit step")
{
    const auto op = upwind_single_shift(8, 8.0);
    CHECK(explicit_step(op, GridField(op.grid(), 0.3), 1.0) == GridField(op.grid(), 0.3));

    // dt = dx transports the data by exactly one cell.
    const GridField u = testing::field_of(op.grid(), {0, 0, 1, 1, 0, 0, 0, 0});
    CHECK(explicit_step(op, u, 1.0) == shift(u, ShiftVector{{-1, 0}}));

    CHECK(op.cfl_constant() == doctest::Approx(1.0));
    try {
        explicit_step(op, u, 1.5);
        FAIL("expected a CFL violation");
    } catch (const CflViolation& e) {
        CHECK(e.admissible_dt() == doctest::Approx(1.0));
        CHECK(std::string(e.what()).find("admissible") != std::string::npos);
    }
}

TEST_CASE("explicit step under CFL is monotone and keeps the invariant region")
{
    std::mt19937_64 rng(4);
    for (const auto& op : assorted_operators()) {
        const double dt = 0.9 / op.cfl_constant();
        for (int t = 0; t < 20; ++t) {
            GridField u = testing::random_field(op.grid(), rng, -1.5, 1.5);
            GridField bump = testing::random_field(op.grid(), rng, 0.0, 0.3);
            const GridField v = u + bump;
            const GridField su = explicit_step(op, u, dt);
            const GridField sv = explicit_step(op, v, dt);
            for (std::size_t x = 0; x < u.size(); ++x)
                CHECK(su[x] <= sv[x] + 1e-14);
            CHECK(su.max() <= std::max(u.max(), 0.0) + 1e-14);
            CHECK(su.min() >= std::min(u.min(), 0.0) - 1e-14);
        }
    }
}

TEST_CASE("apply_B flags values outside the certified range")
{
    std::size_t seen = 0;
    set_warning_sink([&](const std::string&) { ++seen; });
    const auto op = upwind_single_shift(4, 4.0);
    apply_B(op, GridField(op.grid(), 50.0));
    CHECK(op.range_warnings() == 1);
    set_warning_sink(nullptr);
}

TEST_CASE("harmonic-mass CFL constant grows like log(m)/delta")
{
    const Grid g = Grid::line(512, 1.0);
    const double dx = g.spacing(0);
    for (int m : {1, 4, 16}) {
        const auto op = OperatorAssembly::from_kernel(
            g, make_kernel("constant", Symmetry::one_sided, {m * dx}, {{0}}), {upwind_advection(1.0, {-1, 1})});
        double harmonic = 0.0;
        for (int s = 1; s <= m; ++s)
            harmonic += 1.0 / s;
        CHECK(op.cfl_constant() == doctest::Approx(harmonic / (m * dx)));
    }
}
