#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "fraclab/geometry.hpp"

namespace fraclab {

/// Compactly supported function sampled on a uniform grid in dimension
/// n in {1,2,3}. Samples live at cell centers; the function is treated as
/// piecewise constant on cells (midpoint rule), so L^p sums and layer-cake
/// integrals are exact for the discretized object. `origin` is the center of
/// the first cell; cell (i,j,k) is centered at origin + spacing*(i,j,k).
/// Values outside the stored box are zero by convention, and at least one
/// full layer of zero cells surrounds the nonzero samples on every face.
struct GridFunction {
    int dim = 1;
    double spacing = 1.0;
    Vec origin{};
    std::array<int, 3> shape{1, 1, 1};  // unused axes have extent 1

    std::vector<double> values;

    std::size_t cell_count() const {
        return std::size_t(shape[0]) * std::size_t(shape[1]) * std::size_t(shape[2]);
    }

    std::size_t flat_index(int i, int j, int k) const {
        return (std::size_t(k) * shape[1] + j) * shape[0] + i;
    }

    double at(int i, int j = 0, int k = 0) const { return values[flat_index(i, j, k)]; }
    double& at(int i, int j = 0, int k = 0) { return values[flat_index(i, j, k)]; }

    /// Zero-extended lookup: indices outside the box read as 0.
    double at_extended(int i, int j = 0, int k = 0) const {
        if (i < 0 || i >= shape[0] || j < 0 || j >= shape[1] || k < 0 || k >= shape[2]) return 0.0;
        return values[flat_index(i, j, k)];
    }

    Vec cell_center(int i, int j = 0, int k = 0) const {
        Vec c = origin;
        c[0] += spacing * i;
        if (dim > 1) c[1] += spacing * j;
        if (dim > 2) c[2] += spacing * k;
        return c;
    }

    double cell_volume() const { return std::pow(spacing, dim); }

    double max_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }

    std::size_t support_cell_count() const {
        std::size_t c = 0;
        for (double v : values)
            if (v != 0.0) ++c;
        return c;
    }

    /// Index bounding box of the nonzero samples; false when identically zero.
    bool support_index_box(std::array<int, 3>& lo, std::array<int, 3>& hi) const {
        lo = {shape[0], shape[1], shape[2]};
        hi = {-1, -1, -1};
        for (int k = 0; k < shape[2]; ++k)
            for (int j = 0; j < shape[1]; ++j)
                for (int i = 0; i < shape[0]; ++i)
                    if (at(i, j, k) != 0.0) {
                        lo = {std::min(lo[0], i), std::min(lo[1], j), std::min(lo[2], k)};
                        hi = {std::max(hi[0], i), std::max(hi[1], j), std::max(hi[2], k)};
                    }
        return hi[0] >= 0;
    }

    /// Diagonal extent of the support bounding box measured over full cells.
    double support_diameter() const {
        std::array<int, 3> lo, hi;
        if (!support_index_box(lo, hi)) return 0.0;
        double s = 0.0;
        for (int a = 0; a < dim; ++a) {
            double e = spacing * (hi[a] - lo[a] + 1);
            s += e * e;
        }
        return std::sqrt(s);
    }

    /// Sorted distinct magnitudes of the nonzero samples.
    std::vector<double> distinct_abs_values() const {
        std::set<double> s;
        for (double v : values)
            if (v != 0.0) s.insert(std::abs(v));
        return {s.begin(), s.end()};
    }

    /// Enforces the type invariants; throws std::invalid_argument on breach.
    void validate() const {
        if (dim < 1 || dim > 3) throw std::invalid_argument("GridFunction: dim must be 1, 2, or 3");
        if (!(spacing > 0.0)) throw std::invalid_argument("GridFunction: spacing must be positive");
        if (values.size() != cell_count())
            throw std::invalid_argument("GridFunction: value array does not match shape");
        for (double v : values)
            if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite sample");
        std::array<int, 3> lo, hi;
        if (!support_index_box(lo, hi)) return;  // identically zero is fine
        for (int a = 0; a < dim; ++a)
            if (lo[a] < 1 || hi[a] > shape[a] - 2)
                throw std::invalid_argument(
                    "GridFunction: nonzero samples must leave a zero padding layer on every face");
    }
};

/// Samples x -> f(lambda x). The lattice is divided by lambda as well, so the
/// sample array is carried over unchanged (nearest-sample resampling lands
/// exactly on existing nodes): resampling is exact.
inline GridFunction dilate(const GridFunction& f, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("dilate: lambda must be positive and finite");
    GridFunction g = f;
    g.spacing = f.spacing / lambda;
    g.origin = scale(f.origin, 1.0 / lambda);
    return g;
}

/// Shifts the grid by whole cells (exact; sample array unchanged).
inline GridFunction translate_cells(const GridFunction& f, const std::array<int, 3>& cells) {
    GridFunction g = f;
    for (int a = 0; a < f.dim; ++a) g.origin[a] += f.spacing * cells[a];
    return g;
}

/// Set of grid cells where |f| > t, with its Lebesgue volume and, when the
/// cell set is recognizably a digitized ball or box, an attached analytic
/// approximation for capacity/perimeter evaluation.
struct SuperlevelSet {
    int dim = 1;
    double spacing = 1.0;
    Vec origin{};
    std::vector<std::array<int, 3>> cells;
    std::optional<GeometricSet> geometric;

    bool empty() const { return cells.empty(); }
    double volume() const { return double(cells.size()) * std::pow(spacing, dim); }

    Vec cell_center(const std::array<int, 3>& c) const {
        Vec p = origin;
        for (int a = 0; a < dim; ++a) p[a] += spacing * c[a];
        return p;
    }
};

namespace detail {

inline void try_attach_geometric(SuperlevelSet& s) {
    if (s.cells.empty()) return;
    std::array<int, 3> lo{s.cells[0]}, hi{s.cells[0]};
    for (const auto& c : s.cells)
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], c[a]);
            hi[a] = std::max(hi[a], c[a]);
        }
    std::size_t box_cells = 1;
    for (int a = 0; a < s.dim; ++a) box_cells *= std::size_t(hi[a] - lo[a] + 1);

    if (box_cells == s.cells.size()) {
        // Full index box: digitized axis box with cell-boundary corners.
        Vec blo = s.origin, bhi = s.origin;
        for (int a = 0; a < s.dim; ++a) {
            blo[a] += s.spacing * lo[a] - 0.5 * s.spacing;
            bhi[a] += s.spacing * hi[a] + 0.5 * s.spacing;
        }
        for (int a = s.dim; a < 3; ++a) blo[a] = bhi[a] = 0.0;
        s.geometric = GeometricSet::box(s.dim, blo, bhi);
        return;
    }

    // Ball test: volume-matched radius around the centroid, all cells within
    // one cell diagonal of the sphere and no interior lattice holes.
    Vec centroid{};
    for (const auto& c : s.cells) {
        Vec p = s.cell_center(c);
        for (int a = 0; a < s.dim; ++a) centroid[a] += p[a];
    }
    for (int a = 0; a < s.dim; ++a) centroid[a] /= double(s.cells.size());
    double r_vol = std::pow(s.volume() / unit_ball_volume(s.dim), 1.0 / s.dim);
    double tol = s.spacing * std::sqrt(double(s.dim));

    std::set<std::array<int, 3>> members(s.cells.begin(), s.cells.end());
    for (const auto& c : s.cells)
        if (norm(sub(s.cell_center(c), centroid), s.dim) > r_vol + tol) return;
    for (int k = lo[2]; k <= hi[2]; ++k)
        for (int j = lo[1]; j <= hi[1]; ++j)
            for (int i = lo[0]; i <= hi[0]; ++i) {
                std::array<int, 3> c{i, j, k};
                if (norm(sub(s.cell_center(c), centroid), s.dim) <= r_vol - tol &&
                    !members.count(c))
                    return;
            }
    s.geometric = GeometricSet::ball(s.dim, centroid, r_vol);
}

}  // namespace detail

/// Cells with |f| > t (strict). t beyond max|f| yields the empty descriptor.
/// `attach` controls the ball/box recognition pass (skipped by callers that
/// only need volumes).
inline SuperlevelSet superlevel_set(const GridFunction& f, double t, bool attach = true) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("superlevel_set: t must be positive and finite");
    SuperlevelSet s;
    s.dim = f.dim;
    s.spacing = f.spacing;
    s.origin = f.origin;
    for (int k = 0; k < f.shape[2]; ++k)
        for (int j = 0; j < f.shape[1]; ++j)
            for (int i = 0; i < f.shape[0]; ++i)
                if (std::abs(f.at(i, j, k)) > t) s.cells.push_back({i, j, k});
    if (attach) detail::try_attach_geometric(s);
    return s;
}

/// Embeds two functions with identical spacing and lattice-aligned origins
/// onto one common grid (union bounding box plus the shared padding layer).
/// Throws std::invalid_argument when spacing or alignment differ.
inline std::pair<GridFunction, GridFunction> align_on_common_grid(const GridFunction& f,
                                                                  const GridFunction& g) {
    if (f.dim != g.dim) throw std::invalid_argument("align_on_common_grid: dimension mismatch");
    if (std::abs(f.spacing - g.spacing) > 1e-12 * f.spacing)
        throw std::invalid_argument("align_on_common_grid: spacing mismatch");
    std::array<int, 3> offset{0, 0, 0};
    for (int a = 0; a < f.dim; ++a) {
        double d = (g.origin[a] - f.origin[a]) / f.spacing;
        double r = std::round(d);
        if (std::abs(d - r) > 1e-9)
            throw std::invalid_argument("align_on_common_grid: grids are not lattice-aligned");
        offset[a] = int(r);
    }
    std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < 3; ++a) {
        lo[a] = std::min(0, offset[a]);
        hi[a] = std::max(f.shape[a] - 1, offset[a] + g.shape[a] - 1);
    }
    auto embed = [&](const GridFunction& src, const std::array<int, 3>& shift) {
        GridFunction out;
        out.dim = f.dim;
        out.spacing = f.spacing;
        out.origin = f.origin;
        for (int a = 0; a < f.dim; ++a) out.origin[a] += f.spacing * lo[a];
        out.shape = {hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1};
        out.values.assign(out.cell_count(), 0.0);
        for (int k = 0; k < src.shape[2]; ++k)
            for (int j = 0; j < src.shape[1]; ++j)
                for (int i = 0; i < src.shape[0]; ++i)
                    out.at(i + shift[0] - lo[0], j + shift[1] - lo[1], k + shift[2] - lo[2]) =
                        src.at(i, j, k);
        return out;
    };
    return {embed(f, {0, 0, 0}), embed(g, offset)};
}

}  // namespace fraclab
