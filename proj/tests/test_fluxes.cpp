#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "nonloclaw/fluxes.hpp"
#include "nonloclaw/numeric.hpp"

using namespace nonloclaw;

namespace {

const Range kRange{-2.0, 2.0};

FluxPair reversed_flux()
{
    FluxPair f;
    f.name = "reversed";
    f.phi = [](double, double b) { return b; };
    f.psi = [](double a) { return a; };
    f.range = kRange;
    f.k1 = 0.0;
    f.k2 = 1.0;
    return f;
}

std::vector<FluxPair> builtins()
{
    return {upwind_advection(1.5, kRange), engquist_osher_burgers(kRange), lax_friedrichs_split("burgers", -1, kRange),
            lax_friedrichs_split("advection", -1, kRange, 0.7), zero_flux(kRange)};
}

}  // namespace

TEST_CASE("builtin flux values")
{
    const FluxPair eo = engquist_osher_burgers(kRange);
    CHECK(eval_phi(eo, 1.0, -1.0) == 1.0);
    CHECK(eval_phi(upwind_advection(2.0, {-10, 10}), 3.0, -7.0) == 6.0);
    for (const auto& f : builtins())
        CHECK(eval_phi(f, 0.0, 0.0) == 0.0);
    CHECK(eo.k1 == 2.0);
    CHECK(eo.k2 == 2.0);
    CHECK_THROWS_AS(upwind_advection(-1.0, kRange), InvalidInput);
}

TEST_CASE("eval_phi warns outside the range and rejects non-finite values")
{
    std::size_t seen = 0;
    set_warning_sink([&](const std::string&) { ++seen; });
    const std::size_t before = warning_count();
    const FluxPair eo = engquist_osher_burgers(kRange);
    CHECK(eval_phi(eo, 3.0, 0.0) == 4.5);
    CHECK(warning_count() == before + 1);
    set_warning_sink(nullptr);

    FluxPair bad = eo;
    bad.phi = [](double a, double) { return 1.0 / (a - a); };
    CHECK_THROWS_AS(eval_phi(bad, 1.0, 1.0), NonFiniteValue);
}

TEST_CASE("consistency phi(a, a) = psi(a)")
{
    for (const auto& f : builtins())
        for (int k = 0; k <= 40; ++k) {
            const double a = kRange.lo + k * kRange.width() / 40;
            CHECK(f.phi(a, a) == f.psi(a));
        }
}

TEST_CASE("monotonicity check")
{
    for (const auto& f : builtins())
        CHECK(check_monotone(f, 41).passed);

    const auto rev = check_monotone(reversed_flux(), 11);
    CHECK_FALSE(rev.passed);
    CHECK(rev.worst_margin < 0.0);
    CHECK(rev.detail.find("second") != std::string::npos);

    // Central flux: Lax-Friedrichs split without dissipation.
    CHECK_FALSE(check_monotone(lax_friedrichs_split("burgers", 0.0, kRange), 21).passed);
    CHECK_THROWS_AS(check_monotone(engquist_osher_burgers(kRange), 1), InvalidInput);
}

TEST_CASE("Lipschitz constants dominate sampled quotients")
{
    for (const auto& f : builtins())
        CHECK(check_lipschitz(f, 41).passed);
    FluxPair understated = engquist_osher_burgers(kRange);
    understated.k1 = 1.0;
    CHECK_FALSE(check_lipschitz(understated, 41).passed);
}

TEST_CASE("entropy flux q-tilde")
{
    const FluxPair eo = engquist_osher_burgers(kRange);
    CHECK(entropy_flux_tilde(eo, 0.7, 0.7, 0.7) == 0.0);
    CHECK(entropy_flux_tilde(eo, 1.0, -1.0, 0.0) == 0.0);

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> d(kRange.lo, kRange.hi);
    for (const auto& f : builtins()) {
        for (int t = 0; t < 500; ++t) {
            const double a = d(rng), b = d(rng), c = d(rng);
            // Both formulas agree; entropy_flux_tilde throws otherwise.
            CHECK_NOTHROW(entropy_flux_tilde(f, a, b, c));
            CHECK(std::abs(entropy_flux_tilde_maxmin(f, a, b, c) - entropy_flux_tilde_signs(f, a, b, c)) <= 1e-12);
            // Diagonal case: ψ(a∨c) - ψ(a∧c).
            CHECK(std::abs(entropy_flux_tilde(f, a, a, c) - sign0(a - c) * (f.psi(a) - f.psi(c))) <= 1e-12);
        }
    }
}

TEST_CASE("flux inequality audit")
{
    for (const auto& f : builtins()) {
        const auto rep = flux_inequality_audit(f, 21);
        CHECK(rep.passed);
        CHECK(rep.worst_margin >= -1e-12);
        CHECK(rep.checks == 2u * 21 * 21 * 21);
    }
    const auto rev = flux_inequality_audit(reversed_flux(), 21);
    CHECK_FALSE(rev.passed);
    CHECK(rev.worst_margin < -1e-3);
}

TEST_CASE("monotone fluxes always pass the inequality audit")
{
    // Random smooth fluxes, some monotone and some not; every one that passes
    // the monotonicity check must pass the inequality audit.
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    int monotone = 0, rejected = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const double c1 = coef(rng), c2 = coef(rng), c3 = coef(rng), c4 = coef(rng);
        FluxPair f;
        f.name = "random";
        f.phi = [=](double a, double b) { return c1 * a + c2 * b + c3 * std::tanh(a) * (1.0 + 0.5 * c4 * b); };
        f.psi = [f](double a) { return f.phi(a, a); };
        f.range = {-1.0, 1.0};
        const auto mono = check_monotone(f, 21);
        if (mono.passed) {
            ++monotone;
            CHECK(flux_inequality_audit(f, 11).passed);
        } else {
            ++rejected;
        }
    }
    CHECK(monotone > 0);
    CHECK(rejected > 0);
}

TEST_CASE("certified range pads by ten percent")
{
    const Range r = certified_range(-1.0, 3.0);
    CHECK(r.lo == doctest::Approx(-1.4));
    CHECK(r.hi == doctest::Approx(3.4));
    const Range pos = certified_range(0.5, 1.0);
    CHECK(pos.lo == doctest::Approx(-0.1));
    CHECK(pos.hi == doctest::Approx(1.1));
    const Range zero = certified_range(0.0, 0.0);
    CHECK(zero.lo < 0.0);
    CHECK(zero.hi > 0.0);
}
