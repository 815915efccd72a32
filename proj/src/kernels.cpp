#include "nonloclaw/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace nonloclaw {

namespace {

// Shared support logic of the builtin profiles: the horizon box, cut down to
// the closed positive orthant for one-sided kernels. `factor` is the 1D
// profile on the scaled coordinate r = |h|/δ ∈ [0, 1].
template <class F>
Profile product_profile(Symmetry sym, std::vector<double> horizon, F factor, double even_norm, double one_sided_norm)
{
    return [sym, horizon = std::move(horizon), factor, even_norm, one_sided_norm](std::span<const double> h) {
        double value = 1.0;
        for (std::size_t j = 0; j < horizon.size() && j < h.size(); ++j) {
            if (sym == Symmetry::one_sided && h[j] < 0.0)
                return 0.0;
            const double r = std::abs(h[j]) / horizon[j];
            if (r > 1.0)
                return 0.0;
            const double norm = sym == Symmetry::even_symmetric ? even_norm : one_sided_norm;
            value *= norm * factor(r) / horizon[j];
        }
        return value;
    };
}

std::string join_axes(const std::vector<int>& axes)
{
    std::ostringstream out;
    out << '{';
    for (std::size_t k = 0; k < axes.size(); ++k)
        out << (k ? "," : "") << axes[k] + 1;
    out << '}';
    return out.str();
}

void check_partition(const std::vector<std::vector<int>>& partition, int dim, std::vector<std::string>& problems)
{
    if (partition.empty()) {
        problems.emplace_back("partition is empty");
        return;
    }
    std::set<int> covered;
    for (const auto& block : partition) {
        if (block.empty())
            problems.emplace_back("partition contains an empty set");
        for (int axis : block) {
            if (axis < 0 || axis >= dim) {
                problems.push_back("partition set " + join_axes(block) + " names an axis outside 1.." + std::to_string(dim));
                continue;
            }
            if (!covered.insert(axis).second)
                problems.push_back("partition sets overlap on axis " + std::to_string(axis + 1));
        }
    }
    if (static_cast<int>(covered.size()) != dim && problems.empty())
        problems.emplace_back("partition does not cover every axis");
}

}  // namespace

std::string to_string(Symmetry s)
{
    return s == Symmetry::even_symmetric ? "even_symmetric" : "one_sided";
}

Symmetry parse_symmetry(const std::string& name)
{
    if (name == "even_symmetric" || name == "even")
        return Symmetry::even_symmetric;
    if (name == "one_sided")
        return Symmetry::one_sided;
    throw InvalidInput("unknown kernel symmetry '" + name + "' (expected even_symmetric or one_sided)");
}

Profile constant_profile(Symmetry sym, std::vector<double> horizon)
{
    return product_profile(sym, std::move(horizon), [](double) { return 1.0; }, 0.5, 1.0);
}

Profile triangle_profile(Symmetry sym, std::vector<double> horizon)
{
    return product_profile(sym, std::move(horizon), [](double r) { return 1.0 - r; }, 1.0, 2.0);
}

Profile truncated_quadratic_profile(Symmetry sym, std::vector<double> horizon)
{
    return product_profile(sym, std::move(horizon), [](double r) { return 1.0 - r * r; }, 0.75, 1.5);
}

Profile tabulated_profile(Symmetry sym, std::vector<double> horizon, std::vector<double> samples)
{
    if (samples.size() < 2)
        throw InvalidInput("tabulated profile needs at least two samples");
    return [sym, horizon = std::move(horizon), samples = std::move(samples)](std::span<const double> h) {
        double r = 0.0;
        for (std::size_t j = 0; j < horizon.size() && j < h.size(); ++j) {
            if (sym == Symmetry::one_sided && h[j] < 0.0)
                return 0.0;
            r = std::max(r, std::abs(h[j]) / horizon[j]);
        }
        if (r > 1.0)
            return 0.0;
        const double pos = r * static_cast<double>(samples.size() - 1);
        const auto k = std::min(static_cast<std::size_t>(pos), samples.size() - 2);
        const double t = pos - static_cast<double>(k);
        return (1.0 - t) * samples[k] + t * samples[k + 1];
    };
}

KernelSpec make_kernel(const std::string& profile, Symmetry sym, std::vector<double> horizon,
                       std::vector<std::vector<int>> partition)
{
    KernelSpec spec;
    spec.symmetry = sym;
    spec.horizon = horizon;
    spec.profile_name = profile;
    spec.partition = std::move(partition);
    if (profile == "constant")
        spec.profile = constant_profile(sym, std::move(horizon));
    else if (profile == "triangle")
        spec.profile = triangle_profile(sym, std::move(horizon));
    else if (profile == "truncated_quadratic")
        spec.profile = truncated_quadratic_profile(sym, std::move(horizon));
    else
        throw InvalidInput("unknown kernel profile '" + profile + "'");
    return spec;
}

std::vector<std::vector<int>> separable_partition(int dim)
{
    std::vector<std::vector<int>> p;
    for (int a = 0; a < dim; ++a)
        p.push_back({a});
    return p;
}

std::vector<std::vector<int>> full_partition(int dim)
{
    std::vector<int> all;
    for (int a = 0; a < dim; ++a)
        all.push_back(a);
    return {all};
}

KernelValidation validate(const KernelSpec& spec, int samples_per_axis)
{
    KernelValidation out;
    auto& problems = out.problems;
    const int dim = spec.dim();
    if (dim < 1 || dim > kMaxDim)
        problems.emplace_back("kernel horizon must have 1 or 2 entries");
    for (double d : spec.horizon)
        if (!(d > 0.0) || !std::isfinite(d))
            problems.emplace_back("horizon must be positive and finite");
    if (!spec.profile)
        problems.emplace_back("kernel has no profile");
    check_partition(spec.partition, dim, problems);
    if (!problems.empty() || samples_per_axis < 1) {
        out.ok = problems.empty();
        return out;
    }

    // Sample the box [-1.25δ, 1.25δ]^n so support leaks past the horizon show up.
    const int m = samples_per_axis;
    const int reach = m + m / 4 + 1;
    std::vector<double> h(dim, 0.0), mirrored(dim, 0.0);
    double worst_negative = 0.0, worst_asym = 0.0;
    bool outside_orthant = false, outside_box = false, non_finite = false;
    const int span1 = 2 * reach + 1;
    const int total = dim == 1 ? span1 : span1 * span1;
    for (int k = 0; k < total; ++k) {
        int rest = k;
        bool in_box = true, negative_comp = false;
        for (int j = 0; j < dim; ++j) {
            const int step = rest % span1 - reach;
            rest /= span1;
            h[j] = spec.horizon[j] * static_cast<double>(step) / m;
            mirrored[j] = -h[j];
            in_box = in_box && std::abs(step) <= m;
            negative_comp = negative_comp || step < 0;
        }
        const double v = spec.profile(h);
        if (!std::isfinite(v)) {
            non_finite = true;
            continue;
        }
        worst_negative = std::min(worst_negative, v);
        if (v > 0.0 && !in_box)
            outside_box = true;
        if (spec.symmetry == Symmetry::one_sided && v > 0.0 && negative_comp)
            outside_orthant = true;
        if (spec.symmetry == Symmetry::even_symmetric) {
            const double w = spec.profile(mirrored);
            worst_asym = std::max(worst_asym, std::abs(v - w) / std::max(1.0, std::abs(v)));
        }
    }
    if (non_finite)
        problems.emplace_back("profile returns non-finite values");
    if (worst_negative < 0.0)
        problems.push_back("profile is negative on the quadrature lattice (min " + std::to_string(worst_negative) + ")");
    if (outside_box)
        problems.emplace_back("profile support extends past the horizon");
    if (outside_orthant)
        problems.emplace_back("one_sided profile has support outside the positive orthant");
    if (worst_asym > 1e-12)
        problems.emplace_back("even_symmetric profile is not even");
    out.ok = problems.empty();
    return out;
}

double Stencil::weight_sum() const
{
    KahanSum s;
    for (const auto& e : entries)
        s += e.weight;
    return s.value();
}

Stencil build_stencil(const KernelSpec& spec, const Grid& grid, std::size_t i)
{
    if (spec.dim() != grid.dim())
        throw InvalidInput("kernel dimension does not match the grid");
    const auto report = validate(spec);
    if (!report.ok)
        throw InvalidInput("invalid kernel: " + report.problems.front());
    if (i >= spec.partition.size())
        throw InvalidInput("subinteraction index out of range");

    const auto& axes = spec.partition[i];
    std::vector<int> reach(axes.size());
    double active_volume = 1.0;
    for (std::size_t k = 0; k < axes.size(); ++k) {
        const int a = axes[k];
        const double ratio = spec.horizon[a] / grid.spacing(a);
        if (ratio < 1.0 - 1e-9) {
            std::ostringstream msg;
            msg << "horizon " << spec.horizon[a] << " on axis " << a + 1 << " is below the grid spacing "
                << grid.spacing(a) << " (unresolved horizon: need delta >= dx)";
            throw InvalidInput(msg.str());
        }
        const double rounded = std::round(ratio);
        if (std::abs(ratio - rounded) > 1e-9 * rounded) {
            std::ostringstream msg;
            msg << "horizon " << spec.horizon[a] << " on axis " << a + 1 << " is not an integer multiple of dx "
                << grid.spacing(a);
            throw InvalidInput(msg.str());
        }
        reach[k] = static_cast<int>(rounded);
        if (reach[k] >= grid.cells(a))
            throw InvalidInput("horizon on axis " + std::to_string(a + 1) + " spans the whole periodic domain");
        active_volume *= grid.spacing(a);
    }

    const bool even = spec.symmetry == Symmetry::even_symmetric;
    std::vector<int> lo(axes.size()), hi(axes.size());
    for (std::size_t k = 0; k < axes.size(); ++k) {
        lo[k] = even ? -reach[k] : 1;
        hi[k] = reach[k];
    }

    Stencil st;
    st.subinteraction = i;
    std::vector<int> cur = lo;
    std::vector<double> h(grid.dim(), 0.0);
    while (true) {
        ShiftVector s;
        for (std::size_t k = 0; k < axes.size(); ++k)
            s.offsets[axes[k]] = cur[k];
        if (!s.is_zero()) {
            for (int a = 0; a < grid.dim(); ++a)
                h[a] = s.offsets[a] * grid.spacing(a);
            const double w = spec.profile(h) * active_volume;
            if (w > 0.0)
                st.entries.push_back({s, w, physical_norm(grid, s)});
        }
        // Odometer over the active axes, last axis fastest.
        bool done = true;
        for (std::size_t k = axes.size(); k-- > 0;) {
            if (++cur[k] <= hi[k]) {
                done = false;
                break;
            }
            cur[k] = lo[k];
        }
        if (done)
            break;
    }
    if (st.entries.empty())
        throw InvalidInput("kernel profile vanishes on every lattice node of the horizon");

    const double total = st.weight_sum();
    for (auto& e : st.entries)
        e.weight /= total;
    return st;
}

double harmonic_mass(const Stencil& stencil)
{
    KahanSum s;
    for (const auto& e : stencil.entries)
        s += e.weight / e.norm_factor;
    return s.value();
}

}  // namespace nonloclaw
