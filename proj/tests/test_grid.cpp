#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <limits>
#include <sstream>

#include "nonloclaw/field_io.hpp"
#include "nonloclaw/grid.hpp"
#include "support.hpp"

using namespace nonloclaw;

namespace {
ShiftVector s1(int a)
{
    return ShiftVector{{a, 0}};
}
const double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("grid construction rejects degenerate axes")
{
    CHECK_THROWS_AS(Grid({1}, {1.0}), InvalidInput);
    CHECK_THROWS_AS(Grid({4}, {0.0}), InvalidInput);
    CHECK_THROWS_AS(Grid({4, 4, 4}, {1.0, 1.0, 1.0}), InvalidInput);
    const Grid g = Grid::plane(4, 8, 1.0, 2.0);
    CHECK(g.size() == 32);
    CHECK(g.cell_volume() == doctest::Approx(0.0625));
    CHECK(g.linear({-1, 9}) == g.linear({3, 1}));
    for (std::size_t k = 0; k < g.size(); ++k)
        CHECK(g.linear(g.unravel(k)) == k);
}

TEST_CASE("field rejects non-finite values")
{
    const Grid g = Grid::line(4, 4.0);
    CHECK_THROWS_AS(GridField(g, {1.0, std::nan(""), 0.0, 0.0}), NonFiniteValue);
    CHECK_THROWS_AS(GridField(g, {1.0, 2.0}), InvalidInput);
}

TEST_CASE("shift")
{
    const Grid g = Grid::line(4, 4.0);
    const GridField u = testing::field_of(g, {1, 2, 3, 4});
    CHECK(shift(u, s1(0)) == u);
    CHECK(shift(u, s1(1)) == testing::field_of(g, {2, 3, 4, 1}));
    CHECK_THROWS_AS(shift(u, s1(4)), InvalidInput);
    CHECK_THROWS_AS(shift(u, s1(-4)), InvalidInput);

    std::mt19937_64 rng(7);
    const Grid big = Grid::line(16, 1.0);
    const GridField v = testing::random_field(big, rng);
    CHECK(shift(shift(v, s1(2)), s1(-1)) == shift(v, s1(1)));

    // A permutation preserves mass and every p-norm exactly.
    const GridField w = shift(v, s1(5));
    CHECK(w.mass() == doctest::Approx(v.mass()).epsilon(1e-15));
    for (double p : {1.0, 2.0, 3.5, kInf})
        CHECK(norm(w, p) == doctest::Approx(norm(v, p)).epsilon(1e-15));
}

TEST_CASE("shift in two dimensions wraps each axis")
{
    const Grid g = Grid::plane(3, 4, 3.0, 4.0);
    GridField u(g);
    for (std::size_t x = 0; x < u.size(); ++x)
        u[x] = static_cast<double>(x);
    const GridField v = shift(u, ShiftVector{{1, -1}});
    CHECK(v[g.linear({0, 0})] == u[g.linear({1, 3})]);
    CHECK(v[g.linear({2, 2})] == u[g.linear({0, 1})]);
}

TEST_CASE("diff_quotient")
{
    const Grid g = Grid::line(4, 4.0);
    CHECK(diff_quotient(GridField(g, 5.0), s1(3)) == GridField(g, 0.0));
    CHECK(diff_quotient(testing::field_of(g, {0, 1, 0, 0}), s1(1)) == testing::field_of(g, {1, -1, 0, 0}));
    CHECK_THROWS_AS(diff_quotient(GridField(g, 1.0), s1(0)), InvalidInput);
}

TEST_CASE("summation by parts for difference quotients")
{
    std::mt19937_64 rng(11);
    const Grid g = Grid::line(16, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const GridField u = testing::random_field(g, rng);
        const GridField v = testing::random_field(g, rng);
        for (int s = -15; s <= 15; ++s) {
            if (s == 0)
                continue;
            // Brute force double sum, independent of inner().
            double lhs = 0.0, rhs = 0.0;
            const GridField du = diff_quotient(u, s1(s));
            const GridField dv = diff_quotient(v, s1(-s));
            for (std::size_t x = 0; x < u.size(); ++x) {
                lhs += v[x] * du[x];
                rhs += u[x] * dv[x];
            }
            CHECK(std::abs(lhs - rhs) <= 1e-13 * 16.0);
        }
    }
}

TEST_CASE("norms")
{
    const Grid g = Grid::line(2, 2.0);
    const GridField u = testing::field_of(g, {3, -4});
    CHECK(norm(u, 1.0) == 7.0);
    CHECK(norm(u, kInf) == 4.0);
    CHECK(norm(u, 2.0) == doctest::Approx(5.0));
    CHECK_THROWS_AS(norm(u, 0.5), InvalidInput);

    std::mt19937_64 rng(3);
    const Grid g2 = Grid::plane(8, 8, 2.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const GridField w = testing::random_field(g2, rng, -3.0, 2.0);
        for (double p : {2.0, 3.0}) {
            const double bound = std::pow(norm(w, 1.0), 1.0 / p) * std::pow(norm(w, kInf), 1.0 - 1.0 / p);
            CHECK(norm(w, p) <= bound * (1.0 + 1e-14));
        }
    }
}

TEST_CASE("field csv round trip is value exact")
{
    std::mt19937_64 rng(5);
    for (const Grid& g : {Grid::line(7, 0.3), Grid::plane(3, 5, 1.0 / 3.0, 2.0)}) {
        GridField u = testing::random_field(g, rng, -1e3, 1e3);
        u[0] = 1e-300;
        u[1] = -0.1;
        std::stringstream buf;
        write_field_csv(buf, u);
        const GridField back = read_field_csv(buf);
        CHECK(back.grid() == g);
        CHECK(back == u);
    }
}

TEST_CASE("field csv rejects malformed input")
{
    std::stringstream missing("0,1.0\n");
    CHECK_THROWS_AS(read_field_csv(missing), InvalidInput);
    std::stringstream short_rows("# dim,cells,spacing\n# 1,3,0.5\n0,1\n1,2\n");
    CHECK_THROWS_AS(read_field_csv(short_rows), InvalidInput);
}

TEST_CASE("sha256 of a known string")
{
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
