#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "nonloclaw/kernels.hpp"

using namespace nonloclaw;

namespace {

std::vector<int> shifts_1d(const Stencil& st)
{
    std::vector<int> s;
    for (const auto& e : st.entries)
        s.push_back(e.shift.offsets[0]);
    return s;
}

KernelSpec one_d(const std::string& profile, Symmetry sym, double delta)
{
    return make_kernel(profile, sym, {delta}, {{0}});
}

}  // namespace

TEST_CASE("validate accepts the builtin 1D profiles")
{
    CHECK(validate(one_d("constant", Symmetry::one_sided, 0.5)).ok);
    CHECK(validate(one_d("triangle", Symmetry::even_symmetric, 0.5)).ok);
    CHECK(validate(one_d("truncated_quadratic", Symmetry::even_symmetric, 0.5)).ok);
    CHECK(validate(make_kernel("triangle", Symmetry::one_sided, {0.5, 0.25}, full_partition(2))).ok);
}

TEST_CASE("validate reports malformed kernels")
{
    auto overlap = make_kernel("constant", Symmetry::even_symmetric, {1.0, 1.0}, {{0}, {0, 1}});
    auto rep = validate(overlap);
    CHECK_FALSE(rep.ok);
    CHECK(rep.problems.front().find("overlap") != std::string::npos);

    auto uncovered = make_kernel("constant", Symmetry::even_symmetric, {1.0, 1.0}, {{1}});
    CHECK_FALSE(validate(uncovered).ok);

    KernelSpec negative = one_d("constant", Symmetry::even_symmetric, 1.0);
    negative.profile = [](std::span<const double> h) { return h[0] > 0.5 ? -1.0 : 1.0; };
    CHECK_FALSE(validate(negative).ok);

    // An even profile declared one-sided leaks onto h < 0.
    KernelSpec leaking = one_d("constant", Symmetry::one_sided, 1.0);
    leaking.profile = constant_profile(Symmetry::even_symmetric, {1.0});
    rep = validate(leaking);
    CHECK_FALSE(rep.ok);
    CHECK(rep.problems.front().find("orthant") != std::string::npos);

    KernelSpec lopsided = one_d("constant", Symmetry::even_symmetric, 1.0);
    lopsided.profile = constant_profile(Symmetry::one_sided, {1.0});
    CHECK_FALSE(validate(lopsided).ok);

    KernelSpec wide = one_d("constant", Symmetry::even_symmetric, 1.0);
    wide.profile = constant_profile(Symmetry::even_symmetric, {2.0});
    CHECK_FALSE(validate(wide).ok);
}

TEST_CASE("one-sided constant stencil, delta = 2 dx")
{
    const Grid g = Grid::line(16, 16.0);
    const Stencil st = build_stencil(one_d("constant", Symmetry::one_sided, 2.0), g, 0);
    CHECK(shifts_1d(st) == std::vector<int>{1, 2});
    REQUIRE(st.entries.size() == 2);
    CHECK(st.entries[0].weight == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(st.entries[1].weight == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(st.entries[0].norm_factor == 1.0);
    CHECK(st.entries[1].norm_factor == 2.0);
    CHECK(harmonic_mass(st) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("even constant stencil, delta = 2 dx")
{
    const Grid g = Grid::line(16, 4.0);
    const Stencil st = build_stencil(one_d("constant", Symmetry::even_symmetric, 0.5), g, 0);
    CHECK(shifts_1d(st) == std::vector<int>{-2, -1, 1, 2});
    for (const auto& e : st.entries)
        CHECK(e.weight == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("single-shift stencil has harmonic mass 1/dx")
{
    const Grid g = Grid::line(8, 2.0);
    const Stencil st = build_stencil(one_d("constant", Symmetry::one_sided, 0.25), g, 0);
    REQUIRE(st.entries.size() == 1);
    CHECK(harmonic_mass(st) == doctest::Approx(4.0));
}

TEST_CASE("profile vanishing near the origin bounds the harmonic mass")
{
    const double delta = 1.0;
    const Grid g = Grid::line(64, 4.0);  // dx = 1/16
    KernelSpec spec = one_d("constant", Symmetry::one_sided, delta);
    spec.profile = tabulated_profile(Symmetry::one_sided, {delta}, {0, 0, 0, 0, 0, 1, 1, 1, 1});
    const Stencil st = build_stencil(spec, g, 0);
    for (const auto& e : st.entries)
        CHECK(e.norm_factor >= delta / 2);
    CHECK(harmonic_mass(st) <= 2.0 / delta);
}

TEST_CASE("horizon preconditions")
{
    const Grid g = Grid::line(16, 1.0);
    CHECK_THROWS_WITH_AS(build_stencil(one_d("constant", Symmetry::one_sided, 0.03), g, 0),
                         doctest::Contains("horizon"), InvalidInput);
    CHECK_THROWS_WITH_AS(build_stencil(one_d("constant", Symmetry::one_sided, 0.1), g, 0),
                         doctest::Contains("integer multiple"), InvalidInput);
}

TEST_CASE("stencil invariants over builtin kernels")
{
    const Grid g1 = Grid::line(64, 1.0);
    const Grid g2 = Grid::plane(32, 16, 1.0, 0.5);
    for (const std::string profile : {"constant", "triangle", "truncated_quadratic"}) {
        for (Symmetry sym : {Symmetry::even_symmetric, Symmetry::one_sided}) {
            for (int m : {1, 2, 3, 5}) {
                std::vector<std::pair<KernelSpec, Grid>> cases;
                cases.emplace_back(make_kernel(profile, sym, {m / 64.0}, {{0}}), g1);
                cases.emplace_back(make_kernel(profile, sym, {m / 32.0, m / 32.0}, full_partition(2)), g2);
                cases.emplace_back(make_kernel(profile, sym, {m / 32.0, m / 32.0}, separable_partition(2)), g2);
                for (const auto& [spec, grid] : cases) {
                    for (std::size_t i = 0; i < spec.subinteractions(); ++i) {
                        // Tapered profiles vanish on the horizon, so m = 1 may leave no node.
                        Stencil st;
                        try {
                            st = build_stencil(spec, grid, i);
                        } catch (const InvalidInput&) {
                            CHECK((profile != "constant" && m == 1));
                            continue;
                        }
                        CHECK(std::abs(st.weight_sum() - 1.0) <= 1e-12);
                        double first[2] = {0, 0};
                        for (const auto& e : st.entries) {
                            CHECK_FALSE(e.shift.is_zero());
                            CHECK(e.weight >= 0.0);
                            for (int a = 0; a < grid.dim(); ++a)
                                first[a] += e.weight * e.shift.offsets[a] * grid.spacing(a);
                            if (sym == Symmetry::even_symmetric) {
                                const ShiftVector mirror = -e.shift;
                                auto it = std::find_if(st.entries.begin(), st.entries.end(),
                                                       [&](const StencilEntry& o) { return o.shift == mirror; });
                                REQUIRE(it != st.entries.end());
                                CHECK(it->weight == doctest::Approx(e.weight).epsilon(1e-14));
                            } else {
                                for (int a = 0; a < grid.dim(); ++a)
                                    CHECK(e.shift.offsets[a] >= 0);
                            }
                        }
                        if (sym == Symmetry::even_symmetric)
                            for (double f : first)
                                CHECK(std::abs(f) <= 1e-12);
                    }
                }
            }
        }
    }
}

TEST_CASE("halving dx at least doubles the entry count")
{
    for (Symmetry sym : {Symmetry::even_symmetric, Symmetry::one_sided}) {
        const auto spec = make_kernel("constant", sym, {0.125}, {{0}});
        const auto coarse = build_stencil(spec, Grid::line(32, 1.0), 0);
        const auto fine = build_stencil(spec, Grid::line(64, 1.0), 0);
        CHECK(fine.entries.size() >= 2 * coarse.entries.size());
    }
}

TEST_CASE("separable 2D partition acts along one axis per subinteraction")
{
    const Grid g = Grid::plane(16, 16, 1.0, 1.0);
    const auto spec = make_kernel("constant", Symmetry::even_symmetric, {2.0 / 16, 3.0 / 16}, separable_partition(2));
    const auto sx = build_stencil(spec, g, 0);
    const auto sy = build_stencil(spec, g, 1);
    CHECK(sx.entries.size() == 4);
    CHECK(sy.entries.size() == 6);
    for (const auto& e : sx.entries)
        CHECK(e.shift.offsets[1] == 0);
    for (const auto& e : sy.entries)
        CHECK(e.shift.offsets[0] == 0);
}
