#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fraclab/geometry.hpp"
#include "fraclab/grid_function.hpp"
#include "fraclab/lorentz.hpp"

namespace fraclab {

/// Radial nonincreasing step function: value values[i] on the annulus
/// [radii[i-1], radii[i]) with radii[-1] = 0, and 0 beyond radii.back().
/// The final stored annulus carries the value 0, so the support is compact
/// and explicit. Radii use the volume normalization: the ball of radius
/// radii[i] has exactly the superlevel volume it replaces.
struct RadialProfile {
    int dim = 1;
    std::vector<double> radii;
    std::vector<double> values;

    double value_at(double r) const {
        for (std::size_t i = 0; i < radii.size(); ++i)
            if (r < radii[i]) return values[i];
        return 0.0;
    }

    double support_radius() const {
        double r = 0.0;
        for (std::size_t i = 0; i < radii.size(); ++i)
            if (values[i] > 0.0) r = radii[i];
        return r;
    }

    double max_value() const { return values.empty() ? 0.0 : values.front(); }

    /// Radius of the superlevel ball {profile > t}; 0 when t >= max value.
    double superlevel_radius(double t) const {
        double r = 0.0;
        for (std::size_t i = 0; i < radii.size(); ++i)
            if (values[i] > t) r = radii[i];
        return r;
    }

    double superlevel_volume(double t) const {
        return unit_ball_volume(dim) * std::pow(superlevel_radius(t), dim);
    }

    /// Pointwise power t -> t^s (s > 0 nondecreasing, so annuli are preserved).
    RadialProfile pow(double s) const {
        RadialProfile out = *this;
        for (double& v : out.values) v = v == 0.0 ? 0.0 : std::pow(v, s);
        return out;
    }

    void validate() const {
        if (radii.size() != values.size())
            throw std::invalid_argument("RadialProfile: radii/values size mismatch");
        if (radii.empty()) throw std::invalid_argument("RadialProfile: empty profile");
        double prev = 0.0;
        for (double r : radii) {
            if (!(r > prev)) throw std::invalid_argument("RadialProfile: radii must increase from 0");
            prev = r;
        }
        for (std::size_t i = 1; i < values.size(); ++i)
            if (values[i] > values[i - 1])
                throw std::invalid_argument("RadialProfile: values must be nonincreasing");
        if (values.back() != 0.0)
            throw std::invalid_argument("RadialProfile: last value must be 0 (compact support)");
    }
};

/// Symmetric decreasing rearrangement f#: each superlevel set of the
/// digitized function is replaced by the origin-centered ball of the same
/// volume; levels come from the GridValues partition, so equimeasurability
/// holds by construction up to cell quantization.
inline RadialProfile rearrange(const GridFunction& f) {
    RadialProfile prof;
    prof.dim = f.dim;
    auto levels = f.distinct_abs_values();  // ascending
    if (levels.empty()) {
        prof.radii = {f.spacing};
        prof.values = {0.0};
        return prof;
    }
    const double vn = unit_ball_volume(f.dim);
    // Volume of {|f| >= t_j} via one sorted pass over the sample magnitudes.
    std::vector<double> mags;
    mags.reserve(f.values.size());
    for (double v : f.values)
        if (v != 0.0) mags.push_back(std::abs(v));
    std::sort(mags.begin(), mags.end());
    std::vector<double> radii_desc(levels.size());
    for (std::size_t j = 0; j < levels.size(); ++j) {
        auto it = std::lower_bound(mags.begin(), mags.end(), levels[j]);
        double vol = double(mags.end() - it) * f.cell_volume();
        radii_desc[j] = std::pow(vol / vn, 1.0 / f.dim);
    }
    // Annuli from the innermost (top value) outward, plus the zero tail.
    for (std::size_t j = levels.size(); j-- > 0;) {
        prof.radii.push_back(radii_desc[j]);
        prof.values.push_back(levels[j]);
    }
    prof.radii.push_back(radii_desc.front() + f.spacing);
    prof.values.push_back(0.0);
    prof.validate();
    return prof;
}

/// Samples a radial profile back onto a centered grid (used to feed f# into
/// grid-based norms).
inline GridFunction digitize(const RadialProfile& prof, double spacing) {
    if (!(spacing > 0.0)) throw std::invalid_argument("digitize: spacing must be positive");
    GridFunction f;
    f.dim = prof.dim;
    f.spacing = spacing;
    int m = int(std::ceil(prof.support_radius() / spacing)) + 2;
    int side = 2 * m + 1;
    f.shape = {side, prof.dim > 1 ? side : 1, prof.dim > 2 ? side : 1};
    for (int a = 0; a < prof.dim; ++a) f.origin[a] = -m * spacing;
    f.values.assign(f.cell_count(), 0.0);
    for (int k = 0; k < f.shape[2]; ++k)
        for (int j = 0; j < f.shape[1]; ++j)
            for (int i = 0; i < f.shape[0]; ++i)
                f.at(i, j, k) = prof.value_at(norm(f.cell_center(i, j, k), prof.dim));
    return f;
}

struct EquimeasurabilityReport {
    bool equal = false;
    double max_deviation = 0.0;
};

/// Checks V(O_t(f)) = V(O_t(f#)) across the GridValues partition (probing
/// strictly inside each level interval and at the levels themselves).
/// Deviations beyond one grid cell volume mean prof is not f's rearrangement.
inline EquimeasurabilityReport equimeasurable(const GridFunction& f, const RadialProfile& prof) {
    if (prof.dim != f.dim) throw std::invalid_argument("equimeasurable: dimension mismatch");
    auto levels = f.distinct_abs_values();
    EquimeasurabilityReport rep;
    if (levels.empty()) {
        rep.equal = prof.support_radius() == 0.0;
        rep.max_deviation = prof.support_radius() == 0.0
                                ? 0.0
                                : unit_ball_volume(f.dim) * std::pow(prof.support_radius(), f.dim);
        return rep;
    }
    std::vector<double> probes;
    double prev = 0.0;
    for (double t : levels) {
        probes.push_back(0.5 * (prev + t));
        probes.push_back(t);
        prev = t;
    }
    for (double t : probes) {
        double vf = superlevel_set(f, t, /*attach=*/false).volume();
        double vp = prof.superlevel_volume(t);
        rep.max_deviation = std::max(rep.max_deviation, std::abs(vf - vp));
    }
    rep.equal = rep.max_deviation <= f.cell_volume() * (1.0 + 1e-9);
    return rep;
}

/// int |g(x)|^s |x|^{-gamma} dx for a grid function (midpoint cells with the
/// analytic origin-cell rule, shared with the Lorentz module).
inline double weighted_integral(const GridFunction& g, double s, double gamma) {
    if (!(s > 0.0)) throw std::invalid_argument("weighted_integral: exponent must be positive");
    if (!(gamma < g.dim) || !(gamma >= 0.0))
        throw std::invalid_argument("weighted_integral: gamma must lie in [0, n)");
    double acc = 0.0;
    for (int k = 0; k < g.shape[2]; ++k)
        for (int j = 0; j < g.shape[1]; ++j)
            for (int i = 0; i < g.shape[0]; ++i) {
                double v = g.at(i, j, k);
                if (v == 0.0) continue;
                acc += std::pow(std::abs(v), s) *
                       detail::radial_cell_weight(gamma, g.dim, g.spacing, g.cell_center(i, j, k));
            }
    return acc;
}

/// Same integral for a radial profile, via the closed-form annulus weights
/// (exact in the radial coordinate).
inline double weighted_integral(const RadialProfile& g, double s, double gamma) {
    if (!(s > 0.0)) throw std::invalid_argument("weighted_integral: exponent must be positive");
    if (!(gamma < g.dim) || !(gamma >= 0.0))
        throw std::invalid_argument("weighted_integral: gamma must lie in [0, n)");
    double sigma = unit_sphere_area(g.dim);
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < g.radii.size(); ++i) {
        if (g.values[i] > 0.0)
            acc += std::pow(g.values[i], s) * sigma *
                   (std::pow(g.radii[i], g.dim - gamma) - std::pow(prev, g.dim - gamma)) /
                   (g.dim - gamma);
        prev = g.radii[i];
    }
    return acc;
}

/// (int f g, int f# g#): the first pairing cell by cell on the common grid,
/// the second radially from the two profiles over merged annuli.
inline std::pair<double, double> riesz_pairing(const GridFunction& f, const GridFunction& g) {
    auto [fa, ga] = align_on_common_grid(f, g);  // throws on grid mismatch
    double direct = 0.0;
    for (std::size_t i = 0; i < fa.values.size(); ++i) direct += fa.values[i] * ga.values[i];
    direct *= fa.cell_volume();

    RadialProfile pf = rearrange(f);
    RadialProfile pg = rearrange(g);
    std::vector<double> cuts;
    cuts.insert(cuts.end(), pf.radii.begin(), pf.radii.end());
    cuts.insert(cuts.end(), pg.radii.begin(), pg.radii.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double vn = unit_ball_volume(f.dim);
    double rearranged = 0.0;
    double prev = 0.0;
    for (double r : cuts) {
        double mid = 0.5 * (prev + r);
        double prod = pf.value_at(mid) * pg.value_at(mid);
        if (prod != 0.0)
            rearranged += prod * vn * (std::pow(r, f.dim) - std::pow(prev, f.dim));
        prev = r;
    }
    return {direct, rearranged};
}

}  // namespace fraclab
