#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>

#include "fraclab/geometry.hpp"
#include "fraclab/grid_function.hpp"
#include "fraclab/params.hpp"

namespace fraclab {

namespace detail {

/// Midpoint-rule weight of |x|^{-gamma} over one cell; the cell containing
/// the origin contributes the closed-form integral over the centered ball of
/// equal volume.
inline double radial_cell_weight(double gamma, int dim, double spacing, const Vec& center) {
    bool origin_cell = true;
    for (int a = 0; a < dim; ++a)
        if (std::abs(center[a]) > 0.5 * spacing * (1.0 + 1e-12)) origin_cell = false;
    double vol = std::pow(spacing, dim);
    if (origin_cell) {
        double rho = std::pow(vol / unit_ball_volume(dim), 1.0 / dim);
        return unit_sphere_area(dim) * std::pow(rho, dim - gamma) / (dim - gamma);
    }
    return std::pow(norm(center, dim), -gamma) * vol;
}

}  // namespace detail

/// Lebesgue volume V.
struct LebesgueVolume {};

/// Radial power weight d(mu_gamma) = |x|^{-gamma} dx with gamma in [0, n).
/// Cell sums use the midpoint rule; the cell containing the origin contributes
/// the closed-form integral over the centered ball of equal volume (an
/// analytic, monotone-consistent treatment of the integrable singularity).
struct RadialWeight {
    double gamma = 0.0;
};

/// Variational capacity upper bound, evaluated through a type-erased capset
/// evaluator bound at construction (see make_capacity_content).
struct CapacityEstimate {
    BesovParams params;
    std::function<double(const GeometricSet&)> eval;
};

/// Netrusov covering content upper bound; eval is bound by
/// make_netrusov_content.
struct NetrusovContent {
    double d = 1.0;
    double theta = 1.0;
    double eps = std::numeric_limits<double>::infinity();
    std::function<double(const GeometricSet&)> eval;
};

/// Monotone set function nu evaluated on superlevel descriptors and on
/// analytic geometric sets: nu(empty) = 0, E subset F implies
/// nu(E) <= nu(F), and nu is finite and nonnegative on bounded sets.
class Content {
public:
    using Variant = std::variant<LebesgueVolume, RadialWeight, CapacityEstimate, NetrusovContent>;

    Content(Variant v) : v_(std::move(v)) {
        if (auto* rw = std::get_if<RadialWeight>(&v_)) {
            if (!(rw->gamma >= 0.0))
                throw std::invalid_argument("Content: RadialWeight gamma must be nonnegative");
        }
    }

    static Content lebesgue() { return Content(LebesgueVolume{}); }
    static Content radial_weight(double gamma) { return Content(RadialWeight{gamma}); }

    const Variant& variant() const { return v_; }

    bool is_measure() const {
        return std::holds_alternative<LebesgueVolume>(v_) || std::holds_alternative<RadialWeight>(v_);
    }

    /// Capacity-type contents evaluate through an attached GeometricSet.
    bool needs_geometric() const { return !is_measure(); }

    std::string label() const {
        if (std::holds_alternative<LebesgueVolume>(v_)) return "lebesgue";
        if (auto* rw = std::get_if<RadialWeight>(&v_)) {
            char buf[48];
            std::snprintf(buf, sizeof(buf), "radial_weight(%g)", rw->gamma);
            return buf;
        }
        if (std::holds_alternative<CapacityEstimate>(v_)) return "besov_capacity";
        return "netrusov";
    }

    /// nu applied to a superlevel descriptor. Capacity-type contents require
    /// an attached GeometricSet; the error signals the caller to use a radial
    /// corpus entry.
    double evaluate(const SuperlevelSet& s) const {
        if (s.empty()) return 0.0;
        if (std::holds_alternative<LebesgueVolume>(v_)) return s.volume();
        if (auto* rw = std::get_if<RadialWeight>(&v_)) {
            if (!(rw->gamma < s.dim))
                throw std::invalid_argument("Content: RadialWeight needs gamma < n");
            double acc = 0.0;
            for (const auto& c : s.cells) acc += radial_cell_weight(*rw, s, c);
            return acc;
        }
        if (!s.geometric)
            throw std::invalid_argument(
                "Content: " + label() +
                " is not evaluable on this superlevel set (no geometric approximation attached; "
                "use a radial corpus entry)");
        return evaluate(*s.geometric);
    }

    /// nu applied to an analytic set. The radial weight integral is exact in
    /// the radius (ray-traced gaps) with angular quadrature for n >= 2.
    double evaluate(const GeometricSet& e) const {
        if (std::holds_alternative<LebesgueVolume>(v_)) return e.volume();
        if (auto* rw = std::get_if<RadialWeight>(&v_)) {
            if (!(rw->gamma < e.dim()))
                throw std::invalid_argument("Content: RadialWeight needs gamma < n");
            return radial_set_integral(rw->gamma, e);
        }
        if (auto* cap = std::get_if<CapacityEstimate>(&v_)) return cap->eval(e);
        return std::get<NetrusovContent>(v_).eval(e);
    }

    /// integral of |x|^{-gamma} over E, exact in the radial coordinate.
    static double radial_set_integral(double gamma, const GeometricSet& e, int angular = 0) {
        int n = e.dim();
        if (angular <= 0) angular = n == 1 ? 2 : (n == 2 ? 512 : 1024);
        SphereRule rule = make_sphere_rule(n, angular);
        double acc = 0.0;
        Vec origin{};
        for (std::size_t d = 0; d < rule.dirs.size(); ++d) {
            double ray = 0.0;
            for (const auto& iv : e.ray_intersections(origin, rule.dirs[d]))
                ray += std::pow(iv.t_out, n - gamma) - std::pow(iv.t_in, n - gamma);
            acc += rule.weights[d] * ray / (n - gamma);
        }
        return acc;
    }

private:
    static double radial_cell_weight(const RadialWeight& rw, const SuperlevelSet& s,
                                     const std::array<int, 3>& c) {
        return detail::radial_cell_weight(rw.gamma, s.dim, s.spacing, s.cell_center(c));
    }

    Variant v_;
};

}  // namespace fraclab
