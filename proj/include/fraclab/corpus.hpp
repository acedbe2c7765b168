#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fraclab/grid_function.hpp"

namespace fraclab {

/// Deterministic test-function corpus request. `resolution` is cells per unit
/// length (spacing = 1/resolution). The seed is echoed into reports; corpus
/// generation itself is seed-free and bitwise reproducible.
struct CorpusSpec {
    std::vector<std::string> names;
    int dim = 1;
    int resolution = 64;
    std::uint64_t seed = 0;
};

inline const std::vector<std::string>& corpus_catalog() {
    static const std::vector<std::string> names = {"bump", "tent", "two_bump", "trunc_power",
                                                   "plateau"};
    return names;
}

namespace detail {

/// Zero-centered grid with odd side length covering radius `radius` plus a
/// two-cell zero margin; the origin coordinate is a cell center at -m*h.
inline GridFunction make_centered_grid(int dim, int resolution, double radius) {
    GridFunction f;
    f.dim = dim;
    f.spacing = 1.0 / resolution;
    int m = int(std::ceil(radius * resolution)) + 2;
    int side = 2 * m + 1;
    f.shape = {side, dim > 1 ? side : 1, dim > 2 ? side : 1};
    for (int a = 0; a < dim; ++a) f.origin[a] = -m * f.spacing;
    f.values.assign(f.cell_count(), 0.0);
    return f;
}

inline void fill_from(GridFunction& f, const std::function<double(const Vec&)>& fn) {
    for (int k = 0; k < f.shape[2]; ++k)
        for (int j = 0; j < f.shape[1]; ++j)
            for (int i = 0; i < f.shape[0]; ++i) f.at(i, j, k) = fn(f.cell_center(i, j, k));
}

/// Normalized bump profile: 1 at the center, support |u| < 1.
inline double bump_profile(double u) {
    double u2 = u * u;
    if (u2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u2));
}

inline double smoothstep(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * (3.0 - 2.0 * u);
}

}  // namespace detail

/// Builds one catalog entry. Catalog (radii relative to the unit ball):
///   bump        exp(-1/(1-|x|^2)) on |x|<1 (max 1/e at the center)
///   tent        max(0, 1-|x|) (piecewise-linear cone)
///   two_bump    unit-height and half-height normalized bumps of radius 0.45
///               centered at -+0.5 along the first axis (disjoint supports)
///   trunc_power max(0, 1-|x|)^2
///   plateau     smoothed indicator of the unit ball; the cubic ramp spans
///               4 grid cells just inside the sphere, so {plateau > 0} is the
///               unit ball and {plateau > 1/2} is the ball minus half a ramp
inline GridFunction make_corpus_entry(const std::string& name, int dim, int resolution) {
    if (resolution < 16) throw std::invalid_argument("corpus: resolution must be at least 16");
    if (dim < 1 || dim > 3) throw std::invalid_argument("corpus: dim must be 1, 2, or 3");
    GridFunction f = detail::make_centered_grid(dim, resolution, 1.0);
    if (name == "bump") {
        detail::fill_from(f, [&](const Vec& x) {
            double r2 = dot(x, x, dim);
            return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
        });
    } else if (name == "tent") {
        detail::fill_from(f, [&](const Vec& x) { return std::max(0.0, 1.0 - norm(x, dim)); });
    } else if (name == "two_bump") {
        const double r = 0.45;
        Vec c1 = {-0.5, 0.0, 0.0}, c2 = {0.5, 0.0, 0.0};
        detail::fill_from(f, [&](const Vec& x) {
            return detail::bump_profile(norm(sub(x, c1), dim) / r) +
                   0.5 * detail::bump_profile(norm(sub(x, c2), dim) / r);
        });
    } else if (name == "trunc_power") {
        const double a = 2.0;
        detail::fill_from(f,
                          [&](const Vec& x) { return std::pow(std::max(0.0, 1.0 - norm(x, dim)), a); });
    } else if (name == "plateau") {
        const double w = 4.0 * f.spacing;
        detail::fill_from(f, [&](const Vec& x) {
            return detail::smoothstep((1.0 - norm(x, dim)) / w);
        });
    } else {
        std::string known;
        for (const auto& n : corpus_catalog()) known += (known.empty() ? "" : ", ") + n;
        throw std::invalid_argument("corpus: unknown entry '" + name + "' (catalog: " + known + ")");
    }
    f.validate();
    return f;
}

inline std::vector<std::pair<std::string, GridFunction>> make_corpus(const CorpusSpec& spec) {
    std::vector<std::pair<std::string, GridFunction>> out;
    out.reserve(spec.names.size());
    for (const auto& name : spec.names)
        out.emplace_back(name, make_corpus_entry(name, spec.dim, spec.resolution));
    return out;
}

}  // namespace fraclab
