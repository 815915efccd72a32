#include "nonloclaw/fluxes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nonloclaw/numeric.hpp"

namespace nonloclaw {

namespace {

constexpr double kMonotoneTol = 1e-12;
constexpr double kTildeTol = 1e-12;

double lattice_point(const Range& r, int k, int samples)
{
    if (k == samples - 1)
        return r.hi;
    return r.lo + r.width() * static_cast<double>(k) / (samples - 1);
}

void require_samples(int samples)
{
    if (samples < 2)
        throw InvalidInput("flux audits need at least 2 samples per axis");
}

void record(AuditReport& rep, double margin, double a, double b, double c, const char* what)
{
    ++rep.checks;
    if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.a = a;
        rep.b = b;
        rep.c = c;
        rep.detail = what;
    }
}

}  // namespace

Range certified_range(double min_value, double max_value)
{
    const double lo = std::min(min_value, 0.0);
    const double hi = std::max(max_value, 0.0);
    double pad = 0.1 * (hi - lo);
    if (pad == 0.0)
        pad = 0.1 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    return {lo - pad, hi + pad};
}

FluxPair upwind_advection(double speed, Range range)
{
    if (!(speed > 0.0))
        throw InvalidInput("upwind_advection needs a positive speed");
    FluxPair f;
    f.name = "upwind_advection";
    f.phi = [speed](double a, double) { return speed * a; };
    f.psi = [speed](double a) { return speed * a; };
    f.dphi_da = [speed](double, double) { return speed; };
    f.dphi_db = [](double, double) { return 0.0; };
    f.k1 = speed;
    f.k2 = 0.0;
    f.range = range;
    return f;
}

FluxPair engquist_osher_burgers(Range range)
{
    FluxPair f;
    f.name = "engquist_osher_burgers";
    f.phi = [](double a, double b) {
        const double p = std::max(a, 0.0);
        const double m = std::min(b, 0.0);
        return 0.5 * p * p + 0.5 * m * m;
    };
    f.psi = [](double a) { return 0.5 * a * a; };
    f.dphi_da = [](double a, double) { return std::max(a, 0.0); };
    f.dphi_db = [](double, double b) { return std::min(b, 0.0); };
    f.k1 = f.k2 = std::max(std::abs(range.lo), std::abs(range.hi));
    f.range = range;
    return f;
}

FluxPair lax_friedrichs_split(const std::string& local_flux, double alpha, Range range, double speed)
{
    std::function<double(double)> psi, dpsi;
    double sup_slope = 0.0;
    if (local_flux == "burgers") {
        psi = [](double a) { return 0.5 * a * a; };
        dpsi = [](double a) { return a; };
        sup_slope = std::max(std::abs(range.lo), std::abs(range.hi));
    } else if (local_flux == "advection") {
        psi = [speed](double a) { return speed * a; };
        dpsi = [speed](double) { return speed; };
        sup_slope = std::abs(speed);
    } else {
        throw InvalidInput("lax_friedrichs_split: unknown local flux '" + local_flux + "'");
    }
    if (alpha < 0.0)
        alpha = sup_slope;
    FluxPair f;
    f.name = "lax_friedrichs_split";
    f.phi = [psi, alpha](double a, double b) { return 0.5 * (psi(a) + psi(b)) + 0.5 * alpha * (a - b); };
    f.psi = psi;
    f.dphi_da = [dpsi, alpha](double a, double) { return 0.5 * (dpsi(a) + alpha); };
    f.dphi_db = [dpsi, alpha](double, double b) { return 0.5 * (dpsi(b) - alpha); };
    f.k1 = f.k2 = 0.5 * (sup_slope + alpha);
    f.range = range;
    return f;
}

FluxPair zero_flux(Range range)
{
    FluxPair f;
    f.name = "zero";
    f.phi = [](double, double) { return 0.0; };
    f.psi = [](double) { return 0.0; };
    f.dphi_da = [](double, double) { return 0.0; };
    f.dphi_db = [](double, double) { return 0.0; };
    f.range = range;
    return f;
}

double eval_phi(const FluxPair& flux, double a, double b)
{
    if (!flux.range.contains(a) || !flux.range.contains(b)) {
        std::ostringstream msg;
        msg << flux.name << ": operands (" << a << ", " << b << ") outside certified range [" << flux.range.lo
            << ", " << flux.range.hi << "]";
        warn(msg.str());
    }
    const double v = flux.phi(a, b);
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << flux.name << ": non-finite flux value at (" << a << ", " << b << ")";
        throw NonFiniteValue(msg.str());
    }
    return v;
}

AuditReport check_monotone(const FluxPair& flux, int samples)
{
    require_samples(samples);
    AuditReport rep;
    for (int i = 0; i < samples; ++i) {
        for (int j = 0; j < samples; ++j) {
            const double a = lattice_point(flux.range, i, samples);
            const double b = lattice_point(flux.range, j, samples);
            const double f = flux.phi(a, b);
            if (i + 1 < samples)
                record(rep, flux.phi(lattice_point(flux.range, i + 1, samples), b) - f, a, b, 0.0,
                       "phi decreases in its first argument");
            if (j + 1 < samples)
                record(rep, f - flux.phi(a, lattice_point(flux.range, j + 1, samples)), a, b, 0.0,
                       "phi increases in its second argument");
        }
    }
    rep.passed = rep.worst_margin >= -kMonotoneTol;
    return rep;
}

AuditReport check_lipschitz(const FluxPair& flux, int samples)
{
    require_samples(samples);
    AuditReport rep;
    for (int i = 0; i < samples; ++i) {
        for (int j = 0; j < samples; ++j) {
            const double a = lattice_point(flux.range, i, samples);
            const double b = lattice_point(flux.range, j, samples);
            const double f = flux.phi(a, b);
            const double tol = 1e-12 * (1.0 + std::abs(f));
            if (i + 1 < samples) {
                const double a2 = lattice_point(flux.range, i + 1, samples);
                record(rep, flux.k1 * (a2 - a) - std::abs(flux.phi(a2, b) - f) + tol, a, b, 0.0,
                       "K1 below a difference quotient");
            }
            if (j + 1 < samples) {
                const double b2 = lattice_point(flux.range, j + 1, samples);
                record(rep, flux.k2 * (b2 - b) - std::abs(flux.phi(a, b2) - f) + tol, a, b, 0.0,
                       "K2 below a difference quotient");
            }
        }
    }
    rep.passed = rep.worst_margin >= 0.0;
    return rep;
}

double entropy_flux_tilde_maxmin(const FluxPair& flux, double a, double b, double c)
{
    return flux.phi(std::max(a, c), std::max(b, c)) - flux.phi(std::min(a, c), std::min(b, c));
}

double entropy_flux_tilde_signs(const FluxPair& flux, double a, double b, double c)
{
    const double sa = sign0(a - c);
    const double sb = sign0(b - c);
    return 0.5 * (sa + sb) * (flux.phi(a, b) - flux.phi(c, c)) + 0.5 * (sa - sb) * (flux.phi(a, c) - flux.phi(c, b));
}

double entropy_flux_tilde(const FluxPair& flux, double a, double b, double c)
{
    const double q1 = entropy_flux_tilde_maxmin(flux, a, b, c);
    const double q2 = entropy_flux_tilde_signs(flux, a, b, c);
    const double scale = std::max({1.0, std::abs(flux.phi(a, b)), std::abs(flux.phi(c, c)), std::abs(flux.phi(a, c)),
                                   std::abs(flux.phi(c, b))});
    if (std::abs(q1 - q2) > kTildeTol * scale) {
        std::ostringstream msg;
        msg << "entropy flux formulas disagree at (" << a << ", " << b << ", " << c << "): " << q1 << " vs " << q2;
        throw Error(msg.str());
    }
    return q1;
}

AuditReport flux_inequality_audit(const FluxPair& flux, int samples)
{
    require_samples(samples);
    AuditReport rep;
    for (int i = 0; i < samples; ++i) {
        const double a = lattice_point(flux.range, i, samples);
        for (int j = 0; j < samples; ++j) {
            const double b = lattice_point(flux.range, j, samples);
            const double fab = flux.phi(a, b);
            for (int k = 0; k < samples; ++k) {
                const double c = lattice_point(flux.range, k, samples);
                const double jump = fab - flux.phi(c, c);
                const double q = entropy_flux_tilde(flux, a, b, c);
                record(rep, q - sign0(b - c) * jump, a, b, c, "sign0(b-c)[phi(a,b)-phi(c,c)] exceeds q~(a,b,c)");
                record(rep, -(sign0(b - c) - sign0(a - c)) * jump, a, b, c,
                       "[sign0(b-c)-sign0(a-c)][phi(a,b)-phi(c,c)] is positive");
            }
        }
    }
    rep.passed = rep.worst_margin >= -kMonotoneTol;
    return rep;
}

}  // namespace nonloclaw
