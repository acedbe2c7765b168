#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fraclab {

/// Point in R^n, n <= 3; unused trailing components are zero.
using Vec = std::array<double, 3>;

inline constexpr Vec vec1(double x) { return {x, 0.0, 0.0}; }
inline constexpr Vec vec2(double x, double y) { return {x, y, 0.0}; }
inline constexpr Vec vec3(double x, double y, double z) { return {x, y, z}; }

inline double dot(const Vec& a, const Vec& b, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vec& a, int dim) { return std::sqrt(dot(a, a, dim)); }

inline Vec sub(const Vec& a, const Vec& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec add(const Vec& a, const Vec& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec scale(const Vec& a, double c) { return {a[0] * c, a[1] * c, a[2] * c}; }

/// Volume of the unit ball in R^n.
inline double unit_ball_volume(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return std::numbers::pi;
        case 3: return 4.0 * std::numbers::pi / 3.0;
        default: throw std::invalid_argument("unit_ball_volume: dim must be 1, 2, or 3");
    }
}

/// Surface measure of the unit sphere S^{n-1} (two points for n=1).
inline double unit_sphere_area(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return 2.0 * std::numbers::pi;
        case 3: return 4.0 * std::numbers::pi;
        default: throw std::invalid_argument("unit_sphere_area: dim must be 1, 2, or 3");
    }
}

struct Ball {
    Vec center{};
    double radius = 0.0;
};

struct AxisBox {
    Vec lo{};
    Vec hi{};
};

/// Half-open parameter interval [t_in, t_out) of a ray inside a set member.
struct RayInterval {
    double t_in = 0.0;
    double t_out = 0.0;
};

namespace detail {

inline double ball_point_distance(const Ball& b, const Vec& x, int dim) {
    return std::max(0.0, norm(sub(x, b.center), dim) - b.radius);
}

inline double box_point_distance(const AxisBox& b, const Vec& x, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
        double d = std::max({b.lo[i] - x[i], x[i] - b.hi[i], 0.0});
        s += d * d;
    }
    return std::sqrt(s);
}

inline bool ball_contains(const Ball& b, const Vec& x, int dim) {
    return norm(sub(x, b.center), dim) <= b.radius;
}

inline bool box_contains(const AxisBox& b, const Vec& x, int dim) {
    for (int i = 0; i < dim; ++i)
        if (x[i] < b.lo[i] || x[i] > b.hi[i]) return false;
    return true;
}

/// Distance from an interior point to the member's boundary (0 outside).
inline double ball_inner_distance(const Ball& b, const Vec& x, int dim) {
    return std::max(0.0, b.radius - norm(sub(x, b.center), dim));
}

inline double box_inner_distance(const AxisBox& b, const Vec& x, int dim) {
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim; ++i) {
        d = std::min(d, x[i] - b.lo[i]);
        d = std::min(d, b.hi[i] - x[i]);
    }
    return std::max(0.0, d);
}

inline bool ray_ball(const Ball& b, const Vec& o, const Vec& dir, int dim, RayInterval& out) {
    // |o + t dir - c|^2 = R^2 with |dir| = 1
    Vec m = sub(b.center, o);
    double tm = dot(m, dir, dim);
    double disc = b.radius * b.radius - (dot(m, m, dim) - tm * tm);
    if (disc <= 0.0) return false;
    double root = std::sqrt(disc);
    double t0 = tm - root, t1 = tm + root;
    if (t1 <= 0.0) return false;
    out.t_in = std::max(0.0, t0);
    out.t_out = t1;
    return out.t_out > out.t_in;
}

inline bool ray_box(const AxisBox& b, const Vec& o, const Vec& dir, int dim, RayInterval& out) {
    double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim; ++i) {
        if (std::abs(dir[i]) < 1e-300) {
            if (o[i] < b.lo[i] || o[i] > b.hi[i]) return false;
            continue;
        }
        double inv = 1.0 / dir[i];
        double a = (b.lo[i] - o[i]) * inv;
        double c = (b.hi[i] - o[i]) * inv;
        if (a > c) std::swap(a, c);
        t0 = std::max(t0, a);
        t1 = std::min(t1, c);
    }
    if (t1 <= t0) return false;
    out.t_in = t0;
    out.t_out = t1;
    return true;
}

}  // namespace detail

/// Analytic description of a bounded set: a ball, an axis-aligned box, or a
/// finite disjoint union of those. Exact volume, membership, and distance
/// queries are available for every variant.
class GeometricSet {
public:
    using Member = std::variant<Ball, AxisBox>;

    /// The empty set (admits the zero test function; capacity 0).
    static GeometricSet empty(int dim) {
        GeometricSet s;
        s.dim_ = check_dim(dim);
        return s;
    }

    static GeometricSet ball(int dim, const Vec& center, double radius) {
        if (radius <= 0.0) throw std::invalid_argument("GeometricSet: radius must be positive");
        GeometricSet s;
        s.dim_ = check_dim(dim);
        s.members_.push_back(Ball{center, radius});
        return s;
    }

    static GeometricSet box(int dim, const Vec& lo, const Vec& hi) {
        GeometricSet s;
        s.dim_ = check_dim(dim);
        for (int i = 0; i < dim; ++i)
            if (!(lo[i] < hi[i]))
                throw std::invalid_argument("GeometricSet: box requires lo < hi componentwise");
        s.members_.push_back(AxisBox{lo, hi});
        return s;
    }

    /// Union of pairwise disjoint members; overlap is rejected so that volume
    /// is additive.
    static GeometricSet disjoint_union(int dim, std::vector<Member> members) {
        if (members.empty())
            throw std::invalid_argument("GeometricSet: union needs at least one member");
        GeometricSet s;
        s.dim_ = check_dim(dim);
        s.members_ = std::move(members);
        for (std::size_t i = 0; i < s.members_.size(); ++i)
            for (std::size_t j = i + 1; j < s.members_.size(); ++j)
                if (s.member_gap(i, j) < 0.0)
                    throw std::invalid_argument("GeometricSet: union members overlap");
        return s;
    }

    int dim() const { return dim_; }
    const std::vector<Member>& members() const { return members_; }

    double volume() const {
        double v = 0.0;
        for (const auto& m : members_) v += member_volume(m);
        return v;
    }

    bool contains(const Vec& x) const {
        for (const auto& m : members_)
            if (std::visit([&](const auto& g) { return member_contains(g, x); }, m)) return true;
        return false;
    }

    /// Euclidean distance from x to the set (0 inside).
    double distance(const Vec& x) const {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& m : members_) {
            double md = std::visit(
                [&](const auto& g) {
                    if constexpr (std::is_same_v<std::decay_t<decltype(g)>, Ball>)
                        return detail::ball_point_distance(g, x, dim_);
                    else
                        return detail::box_point_distance(g, x, dim_);
                },
                m);
            d = std::min(d, md);
            if (d == 0.0) break;
        }
        return d;
    }

    /// Distance from an interior point to the complement; 0 for points outside.
    /// Members are disjoint, so only the containing member's boundary matters.
    double boundary_distance_inside(const Vec& x) const {
        for (const auto& m : members_) {
            double d = std::visit(
                [&](const auto& g) {
                    if constexpr (std::is_same_v<std::decay_t<decltype(g)>, Ball>)
                        return detail::ball_inner_distance(g, x, dim_);
                    else
                        return detail::box_inner_distance(g, x, dim_);
                },
                m);
            if (d > 0.0) return d;
        }
        return 0.0;
    }

    AxisBox bounding_box() const {
        Vec lo{}, hi{};
        lo.fill(std::numeric_limits<double>::infinity());
        hi.fill(-std::numeric_limits<double>::infinity());
        for (const auto& m : members_) {
            AxisBox bb = member_bounding_box(m);
            for (int i = 0; i < dim_; ++i) {
                lo[i] = std::min(lo[i], bb.lo[i]);
                hi[i] = std::max(hi[i], bb.hi[i]);
            }
        }
        for (int i = dim_; i < 3; ++i) lo[i] = hi[i] = 0.0;
        return {lo, hi};
    }

    double diameter() const {
        AxisBox bb = bounding_box();
        return norm(sub(bb.hi, bb.lo), dim_);
    }

    /// Intersection of the ray {o + t w : t >= 0} (|w| = 1) with the set, as
    /// sorted non-overlapping parameter intervals.
    std::vector<RayInterval> ray_intersections(const Vec& o, const Vec& w) const {
        std::vector<RayInterval> hits;
        for (const auto& m : members_) {
            RayInterval iv;
            bool hit = std::visit(
                [&](const auto& g) {
                    if constexpr (std::is_same_v<std::decay_t<decltype(g)>, Ball>)
                        return detail::ray_ball(g, o, w, dim_, iv);
                    else
                        return detail::ray_box(g, o, w, dim_, iv);
                },
                m);
            if (hit) hits.push_back(iv);
        }
        std::sort(hits.begin(), hits.end(),
                  [](const RayInterval& a, const RayInterval& b) { return a.t_in < b.t_in; });
        return hits;
    }

    /// Complement of the ray intersection within [0, inf): the gaps where the
    /// ray runs through E^c. An unbounded final gap has t_out = +inf.
    std::vector<RayInterval> ray_complement_gaps(const Vec& o, const Vec& w) const {
        auto hits = ray_intersections(o, w);
        std::vector<RayInterval> gaps;
        double cur = 0.0;
        for (const auto& h : hits) {
            if (h.t_in > cur) gaps.push_back({cur, h.t_in});
            cur = std::max(cur, h.t_out);
        }
        gaps.push_back({cur, std::numeric_limits<double>::infinity()});
        return gaps;
    }

    static double member_volume_of(const Member& m, int dim) {
        return std::visit(
            [&](const auto& g) {
                if constexpr (std::is_same_v<std::decay_t<decltype(g)>, Ball>) {
                    return unit_ball_volume(dim) * std::pow(g.radius, dim);
                } else {
                    double v = 1.0;
                    for (int i = 0; i < dim; ++i) v *= g.hi[i] - g.lo[i];
                    return v;
                }
            },
            m);
    }

private:
    GeometricSet() = default;

    static int check_dim(int dim) {
        if (dim < 1 || dim > 3) throw std::invalid_argument("GeometricSet: dim must be 1, 2, or 3");
        return dim;
    }

    double member_volume(const Member& m) const { return member_volume_of(m, dim_); }

    template <class G>
    bool member_contains(const G& g, const Vec& x) const {
        if constexpr (std::is_same_v<G, Ball>)
            return detail::ball_contains(g, x, dim_);
        else
            return detail::box_contains(g, x, dim_);
    }

    AxisBox member_bounding_box(const Member& m) const {
        return std::visit(
            [&](const auto& g) -> AxisBox {
                if constexpr (std::is_same_v<std::decay_t<decltype(g)>, Ball>) {
                    Vec lo = g.center, hi = g.center;
                    for (int i = 0; i < dim_; ++i) {
                        lo[i] -= g.radius;
                        hi[i] += g.radius;
                    }
                    return {lo, hi};
                } else {
                    return g;
                }
            },
            m);
    }

    // Signed separation between members i and j: negative means overlap.
    double member_gap(std::size_t i, std::size_t j) const {
        const Member& a = members_[i];
        const Member& b = members_[j];
        auto gap = [&](const auto& ga, const auto& gb) -> double {
            using A = std::decay_t<decltype(ga)>;
            using B = std::decay_t<decltype(gb)>;
            if constexpr (std::is_same_v<A, Ball> && std::is_same_v<B, Ball>) {
                return norm(sub(ga.center, gb.center), dim_) - ga.radius - gb.radius;
            } else if constexpr (std::is_same_v<A, Ball> && std::is_same_v<B, AxisBox>) {
                return detail::box_point_distance(gb, ga.center, dim_) - ga.radius;
            } else if constexpr (std::is_same_v<A, AxisBox> && std::is_same_v<B, Ball>) {
                return detail::box_point_distance(ga, gb.center, dim_) - gb.radius;
            } else {
                double g = -std::numeric_limits<double>::infinity();
                for (int k = 0; k < dim_; ++k) {
                    g = std::max(g, ga.lo[k] - gb.hi[k]);
                    g = std::max(g, gb.lo[k] - ga.hi[k]);
                }
                return g;
            }
        };
        return std::visit(gap, a, b);
    }

    int dim_ = 1;
    std::vector<Member> members_;
};

/// Fixed direction set with quadrature weights summing to the surface measure
/// of S^{n-1}. n=1 uses the two directions; n=2 equispaced angles; n=3 a
/// Gauss-Legendre (polar) x uniform (azimuth) product grid.
struct SphereRule {
    std::vector<Vec> dirs;
    std::vector<double> weights;
};

namespace detail {

/// Gauss-Legendre nodes/weights on [-1,1] via Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) {
                double pp0 = 1.0, pp1 = t;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * t * pp1 - (k - 1.0) * pp0) / k;
                    pp0 = pp1;
                    pp1 = p2;
                }
                dp = n * (t * pp1 - pp0) / (t * t - 1.0);
                break;
            }
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace detail

inline SphereRule make_sphere_rule(int dim, int requested_points) {
    SphereRule r;
    if (dim == 1) {
        r.dirs = {vec1(1.0), vec1(-1.0)};
        r.weights = {1.0, 1.0};
        return r;
    }
    if (dim == 2) {
        int a = std::max(4, requested_points);
        double w = 2.0 * std::numbers::pi / a;
        for (int j = 0; j < a; ++j) {
            double th = 2.0 * std::numbers::pi * (j + 0.5) / a;
            r.dirs.push_back(vec2(std::cos(th), std::sin(th)));
            r.weights.push_back(w);
        }
        return r;
    }
    // n = 3: G polar nodes x 2G azimuth nodes, total 2G^2 >= requested.
    int g = std::max(2, (int)std::ceil(std::sqrt(std::max(1, requested_points) / 2.0)));
    int f = 2 * g;
    std::vector<double> gx, gw;
    detail::gauss_legendre(g, gx, gw);
    for (int i = 0; i < g; ++i) {
        double ct = gx[i];
        double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (int j = 0; j < f; ++j) {
            double ph = 2.0 * std::numbers::pi * (j + 0.5) / f;
            r.dirs.push_back(vec3(st * std::cos(ph), st * std::sin(ph), ct));
            r.weights.push_back(gw[i] * 2.0 * std::numbers::pi / f);
        }
    }
    return r;
}

}  // namespace fraclab
