#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fraclab/besov.hpp"
#include "fraclab/content.hpp"
#include "fraclab/geometry.hpp"
#include "fraclab/grid_function.hpp"
#include "fraclab/lorentz.hpp"
#include "fraclab/params.hpp"
#include "fraclab/rng.hpp"

namespace fraclab {

/// Monte Carlo layout for the fractional perimeter double integral.
/// The outer integral samples y in E from an importance mixture whose density
/// is known in closed form (terms ~ dist(y, boundary)^{-s} per face/component,
/// s matching the boundary blow-up of the integrand); the estimate stays
/// unbiased and the reported standard error is meaningful even when the plain
/// uniform-sampling variance is infinite. Batches use independent substreams
/// reduced in batch order, so results do not depend on the thread count.
struct PerimeterMCConfig {
    enum class InnerScheme { RadialExact, MCImportance };

    int outer_samples = 10000;
    InnerScheme inner_scheme = InnerScheme::RadialExact;
    int inner_samples = 64;           // MCImportance: directions per outer point
    double inner_concentration = 0.5; // MCImportance: tilt towards the near boundary, in [0,1)
    std::uint64_t seed = 1;
    int threads = 1;
    int angular_points = 0;           // RadialExact, n >= 2; 0 selects defaults

    void validate() const {
        if (outer_samples < 1000)
            throw std::invalid_argument("PerimeterMCConfig: outer_samples must be at least 1000");
        if (inner_scheme == InnerScheme::MCImportance && inner_samples < 1)
            throw std::invalid_argument("PerimeterMCConfig: inner_samples must be positive");
        if (inner_concentration < 0.0 || inner_concentration >= 1.0)
            throw std::invalid_argument("PerimeterMCConfig: concentration must lie in [0,1)");
    }
};

struct PerimeterResult {
    double value = 0.0;
    double std_error = 0.0;
    double outer_integral = 0.0;       // int_E I(y)^{q/p} dy
    double outer_std_error = 0.0;
    long samples = 0;
};

namespace detail {

/// One term of the outer importance mixture, with its closed-form mass
/// int dist_face^{-s}. Every term is supported on a single member of E.
struct ImportanceTerm {
    std::size_t member = 0;
    int axis = -1;    // boxes: face axis, sign below; balls: axis = -1
    int side = 0;     // -1 lower face, +1 upper face
    double mass = 0.0;
};

inline double ball_importance_mass(const Ball& b, int dim, double s) {
    // sigma * int_0^R rho^{n-1} (R - rho)^{-s} drho, expanded binomially.
    double acc = 0.0;
    double binom = 1.0;
    for (int j = 0; j < dim; ++j) {
        acc += (j % 2 == 0 ? binom : -binom) / (j + 1.0 - s);
        binom = binom * (dim - 1 - j) / (j + 1.0);
    }
    return unit_sphere_area(dim) * std::pow(b.radius, dim - s) * acc;
}

inline Vec sample_direction(int dim, Substream& rng) {
    if (dim == 1) return vec1(rng.uniform01() < 0.5 ? -1.0 : 1.0);
    if (dim == 2) {
        double th = 2.0 * std::numbers::pi * rng.uniform01();
        return vec2(std::cos(th), std::sin(th));
    }
    double z = 2.0 * rng.uniform01() - 1.0;
    double ph = 2.0 * std::numbers::pi * rng.uniform01();
    double st = std::sqrt(std::max(0.0, 1.0 - z * z));
    return vec3(st * std::cos(ph), st * std::sin(ph), z);
}

/// Density of the outer importance mixture at y (unnormalized), i.e. the sum
/// of dist^{-s} face terms of the member containing y.
inline double importance_density_unnormalized(const GeometricSet& e, const Vec& y, double s) {
    for (const auto& m : e.members()) {
        if (const auto* b = std::get_if<Ball>(&m)) {
            double r = norm(sub(y, b->center), e.dim());
            if (r <= b->radius) return std::pow(b->radius - r, -s);
        } else {
            const auto& bx = std::get<AxisBox>(m);
            bool inside = true;
            for (int a = 0; a < e.dim(); ++a)
                if (y[a] < bx.lo[a] || y[a] > bx.hi[a]) inside = false;
            if (inside) {
                double acc = 0.0;
                for (int a = 0; a < e.dim(); ++a)
                    acc += std::pow(y[a] - bx.lo[a], -s) + std::pow(bx.hi[a] - y[a], -s);
                return acc;
            }
        }
    }
    return 0.0;
}

}  // namespace detail

/// Fractional (beta,p,q)-perimeter
///   P(E) = ( int_E ( int_{E^c} |x-y|^{-(n+p beta) p / q} dx )^{q/p} dy )^{1/q}
/// by outer Monte Carlo with a deterministic (RadialExact) or randomized
/// (MCImportance) inner integral; the inner radial coordinate is always
/// integrated in closed form along ray gaps through E^c. Refuses divergent
/// parameter combinations instead of returning a number.
inline PerimeterResult fractional_perimeter(const GeometricSet& e, const BesovParams& params,
                                            const PerimeterMCConfig& cfg) {
    cfg.validate();
    if (e.dim() != params.dim) throw std::invalid_argument("fractional_perimeter: dim mismatch");
    if (e.members().empty())
        throw std::invalid_argument("fractional_perimeter: empty set");
    const int n = e.dim();
    const double p = params.p, q = params.q, beta = params.beta;
    const double a = (n + p * beta) * p / q;  // kernel exponent
    if (!(a > n))
        throw std::domain_error(
            "fractional_perimeter: inner integral diverges; requires (n+p*beta)*p/q > n");
    if (!(n * q / p - (n + p * beta) > -1.0))
        throw std::domain_error(
            "fractional_perimeter: outer integral diverges; requires n*q/p - (n+p*beta) > -1");

    const double s_imp = std::max(0.0, n + p * beta - n * q / p);
    const double vol = e.volume();

    // Outer importance mixture: one term per ball member, 2n per box member.
    std::vector<detail::ImportanceTerm> terms;
    double total_mass = 0.0;
    if (s_imp > 0.0) {
        for (std::size_t mi = 0; mi < e.members().size(); ++mi) {
            const auto& m = e.members()[mi];
            if (const auto* b = std::get_if<Ball>(&m)) {
                detail::ImportanceTerm t;
                t.member = mi;
                t.mass = detail::ball_importance_mass(*b, n, s_imp);
                terms.push_back(t);
                total_mass += t.mass;
            } else {
                const auto& bx = std::get<AxisBox>(m);
                for (int axis = 0; axis < n; ++axis)
                    for (int side : {-1, +1}) {
                        detail::ImportanceTerm t;
                        t.member = mi;
                        t.axis = axis;
                        t.side = side;
                        double cross = 1.0;
                        for (int o = 0; o < n; ++o)
                            if (o != axis) cross *= bx.hi[o] - bx.lo[o];
                        double len = bx.hi[axis] - bx.lo[axis];
                        t.mass = cross * std::pow(len, 1.0 - s_imp) / (1.0 - s_imp);
                        terms.push_back(t);
                        total_mass += t.mass;
                    }
            }
        }
    }

    SphereRule inner_rule;
    if (cfg.inner_scheme == PerimeterMCConfig::InnerScheme::RadialExact)
        inner_rule = make_sphere_rule(n, cfg.angular_points > 0 ? cfg.angular_points
                                                                : (n == 1 ? 2 : n == 2 ? 256 : 512));

    auto ray_gap_integral = [&](const Vec& y, const Vec& w) {
        double acc = 0.0;
        for (const auto& g : e.ray_complement_gaps(y, w)) {
            double lo = std::pow(g.t_in, double(n) - a);
            double hi = std::isinf(g.t_out) ? 0.0 : std::pow(g.t_out, double(n) - a);
            acc += lo - hi;
        }
        return acc / (a - n);
    };

    auto inner_integral = [&](const Vec& y, detail::Substream& rng) {
        if (cfg.inner_scheme == PerimeterMCConfig::InnerScheme::RadialExact) {
            double acc = 0.0;
            for (std::size_t d = 0; d < inner_rule.dirs.size(); ++d)
                acc += inner_rule.weights[d] * ray_gap_integral(y, inner_rule.dirs[d]);
            return acc;
        }
        // MCImportance: n=1 enumerates both directions exactly; otherwise
        // directions are tilted towards the near boundary with known density
        // pdf(w) = (1 + kappa * w.b) / sigma_{n-1}.
        if (n == 1)
            return ray_gap_integral(y, vec1(1.0)) + ray_gap_integral(y, vec1(-1.0));
        const double kappa = cfg.inner_concentration;
        Vec b{};  // outward direction towards the nearest boundary point
        {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& m : e.members()) {
                if (const auto* bl = std::get_if<Ball>(&m)) {
                    double r = norm(sub(y, bl->center), n);
                    if (r <= bl->radius && bl->radius - r < best) {
                        best = bl->radius - r;
                        b = r > 0 ? scale(sub(y, bl->center), 1.0 / r) : vec1(1.0);
                    }
                } else {
                    const auto& bx = std::get<AxisBox>(m);
                    bool inside = true;
                    for (int ax = 0; ax < n; ++ax)
                        if (y[ax] < bx.lo[ax] || y[ax] > bx.hi[ax]) inside = false;
                    if (!inside) continue;
                    for (int ax = 0; ax < n; ++ax) {
                        if (y[ax] - bx.lo[ax] < best) {
                            best = y[ax] - bx.lo[ax];
                            b = Vec{};
                            b[ax] = -1.0;
                        }
                        if (bx.hi[ax] - y[ax] < best) {
                            best = bx.hi[ax] - y[ax];
                            b = Vec{};
                            b[ax] = 1.0;
                        }
                    }
                }
            }
        }
        const double sigma = unit_sphere_area(n);
        double acc = 0.0;
        for (int m = 0; m < cfg.inner_samples; ++m) {
            Vec w{};
            if (n == 2) {
                // rejection against the (1 + kappa cos) tilt
                double th, acpt;
                do {
                    th = 2.0 * std::numbers::pi * rng.uniform01();
                    Vec cand = vec2(std::cos(th), std::sin(th));
                    acpt = (1.0 + kappa * dot(cand, b, 2)) / (1.0 + kappa);
                    w = cand;
                } while (rng.uniform01() >= acpt);
            } else {
                // inverse CDF for cos(theta) under density (1 + kappa t)/2
                double u = rng.uniform01();
                double t = kappa < 1e-12
                               ? 2.0 * u - 1.0
                               : (-1.0 + std::sqrt(1.0 - 2.0 * kappa * (1.0 - kappa / 2.0 - 2.0 * u))) /
                                     kappa;
                t = std::clamp(t, -1.0, 1.0);
                // orthonormal frame around b
                Vec u1 = std::abs(b[0]) < 0.9 ? vec3(1, 0, 0) : vec3(0, 1, 0);
                double proj = dot(u1, b, 3);
                for (int ax = 0; ax < 3; ++ax) u1[ax] -= proj * b[ax];
                u1 = scale(u1, 1.0 / norm(u1, 3));
                Vec u2 = vec3(b[1] * u1[2] - b[2] * u1[1], b[2] * u1[0] - b[0] * u1[2],
                              b[0] * u1[1] - b[1] * u1[0]);
                double ph = 2.0 * std::numbers::pi * rng.uniform01();
                double st = std::sqrt(std::max(0.0, 1.0 - t * t));
                for (int ax = 0; ax < 3; ++ax)
                    w[ax] = t * b[ax] + st * (std::cos(ph) * u1[ax] + std::sin(ph) * u2[ax]);
            }
            double pdf = (1.0 + kappa * dot(w, b, n)) / sigma;
            acc += ray_gap_integral(y, w) / pdf;
        }
        return acc / cfg.inner_samples;
    };

    auto sample_point = [&](detail::Substream& rng) -> std::pair<Vec, double> {
        if (s_imp <= 0.0) {
            // uniform over E: member by volume, then direct sampling
            double pick = rng.uniform01() * vol;
            std::size_t mi = 0;
            double cum = 0.0;
            for (; mi < e.members().size(); ++mi) {
                cum += GeometricSet::member_volume_of(e.members()[mi], n);
                if (pick <= cum) break;
            }
            mi = std::min(mi, e.members().size() - 1);
            const auto& m = e.members()[mi];
            Vec y{};
            if (const auto* b = std::get_if<Ball>(&m)) {
                Vec w = detail::sample_direction(n, rng);
                double r = b->radius * std::pow(rng.uniform01(), 1.0 / n);
                y = add(b->center, scale(w, r));
            } else {
                const auto& bx = std::get<AxisBox>(m);
                for (int ax = 0; ax < n; ++ax)
                    y[ax] = bx.lo[ax] + rng.uniform01() * (bx.hi[ax] - bx.lo[ax]);
            }
            return {y, 1.0 / vol};
        }
        // importance mixture
        double pick = rng.uniform01() * total_mass;
        std::size_t ti = 0;
        double cum = 0.0;
        for (; ti < terms.size(); ++ti) {
            cum += terms[ti].mass;
            if (pick <= cum) break;
        }
        ti = std::min(ti, terms.size() - 1);
        const auto& t = terms[ti];
        const auto& m = e.members()[t.member];
        Vec y{};
        if (const auto* b = std::get_if<Ball>(&m)) {
            // radius from density ~ rho^{n-1} (R - rho)^{-s} by rejection from
            // the (R - rho)^{-s} proposal
            double r;
            do {
                double u = rng.uniform01();
                r = b->radius -
                    std::pow(std::pow(b->radius, 1.0 - s_imp) * (1.0 - u), 1.0 / (1.0 - s_imp));
            } while (rng.uniform01() >= std::pow(r / b->radius, double(n - 1)));
            Vec w = detail::sample_direction(n, rng);
            y = add(b->center, scale(w, r));
        } else {
            const auto& bx = std::get<AxisBox>(m);
            for (int ax = 0; ax < n; ++ax)
                y[ax] = bx.lo[ax] + rng.uniform01() * (bx.hi[ax] - bx.lo[ax]);
            double len = bx.hi[t.axis] - bx.lo[t.axis];
            double d = std::pow(rng.uniform01() * std::pow(len, 1.0 - s_imp), 1.0 / (1.0 - s_imp));
            y[t.axis] = t.side < 0 ? bx.lo[t.axis] + d : bx.hi[t.axis] - d;
        }
        double g = detail::importance_density_unnormalized(e, y, s_imp) / total_mass;
        return {y, g};
    };

    const int batches = 64;
    const long total = cfg.outer_samples;
    struct BatchStat {
        double sum = 0.0, sum_sq = 0.0;
        long count = 0;
    };
    auto run_batch = [&](int bi) {
        detail::Substream rng(cfg.seed, std::uint64_t(bi));
        BatchStat st;
        long nb = total / batches + (bi < total % batches ? 1 : 0);
        for (long i = 0; i < nb; ++i) {
            auto [y, g] = sample_point(rng);
            double inner = inner_integral(y, rng);
            double w = std::pow(inner, q / p) / g;
            st.sum += w;
            st.sum_sq += w * w;
            ++st.count;
        }
        return st;
    };

    std::vector<BatchStat> stats(batches);
    if (cfg.threads > 1) {
        std::vector<std::future<BatchStat>> futs;
        futs.reserve(batches);
        for (int bi = 0; bi < batches; ++bi)
            futs.push_back(std::async(std::launch::async, run_batch, bi));
        for (int bi = 0; bi < batches; ++bi) stats[bi] = futs[bi].get();
    } else {
        for (int bi = 0; bi < batches; ++bi) stats[bi] = run_batch(bi);
    }

    double sum = 0.0, sum_sq = 0.0;
    long count = 0;
    for (const auto& st : stats) {  // fixed reduction order
        sum += st.sum;
        sum_sq += st.sum_sq;
        count += st.count;
    }
    double mean = sum / count;
    double var = std::max(0.0, (sum_sq - count * mean * mean) / std::max<long>(1, count - 1));
    PerimeterResult res;
    res.outer_integral = mean;
    res.outer_std_error = std::sqrt(var / count);
    res.samples = count;
    res.value = std::pow(mean, 1.0 / q);
    res.std_error = mean > 0.0 ? res.value / (q * mean) * res.outer_std_error : 0.0;
    return res;
}

/// Mollified-indicator family for capacity upper bounds: ramp profile applied
/// to 1 - dist(x, K)/eps, digitized at spacing eps/4. GoldenSection assumes a
/// unimodal norm-vs-eps profile; GridScan makes no assumption.
struct CapacityFamilyConfig {
    enum class Profile { Linear, SmoothPoly };
    enum class Optimizer { GridScan, GoldenSection };

    std::vector<double> eps_grid = {0.4, 0.3, 0.2, 0.15, 0.1};
    Profile profile = Profile::Linear;
    int smooth_degree = 3;
    Optimizer optimizer = Optimizer::GridScan;
    double golden_tol = 0.05;

    void validate() const {
        if (eps_grid.empty()) throw std::invalid_argument("CapacityFamilyConfig: empty eps grid");
        for (std::size_t i = 0; i < eps_grid.size(); ++i) {
            if (!(eps_grid[i] > 0.0 && eps_grid[i] < 1.0))
                throw std::invalid_argument("CapacityFamilyConfig: eps values must lie in (0,1)");
            if (i > 0 && !(eps_grid[i] < eps_grid[i - 1]))
                throw std::invalid_argument("CapacityFamilyConfig: eps grid must decrease");
        }
        if (profile == Profile::SmoothPoly && smooth_degree != 3 && smooth_degree != 5)
            throw std::invalid_argument("CapacityFamilyConfig: smooth_degree must be 3 or 5");
    }
};

namespace detail {

inline double ramp_profile(double u, CapacityFamilyConfig::Profile profile, int degree) {
    u = std::clamp(u, 0.0, 1.0);
    if (profile == CapacityFamilyConfig::Profile::Linear) return u;
    if (degree == 3) return u * u * (3.0 - 2.0 * u);
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

inline int max_cells_per_axis(int dim) { return dim == 1 ? 2'000'000 : dim == 2 ? 4096 : 320; }

}  // namespace detail

/// Digitized admissible function f_eps (1 on K, linear/polynomial ramp of
/// width eps outside). Throws when the implied grid exceeds the per-dimension
/// cell cap, reporting the required resolution.
inline GridFunction mollified_indicator(const GeometricSet& k, double eps,
                                        CapacityFamilyConfig::Profile profile = {},
                                        int degree = 3) {
    if (!(eps > 0.0)) throw std::invalid_argument("mollified_indicator: eps must be positive");
    const int n = k.dim();
    const double h = eps / 4.0;
    AxisBox bb = k.bounding_box();
    GridFunction f;
    f.dim = n;
    f.spacing = h;
    for (int a = 0; a < n; ++a) {
        double lo = bb.lo[a] - eps - 2.0 * h;
        double hi = bb.hi[a] + eps + 2.0 * h;
        int cells = int(std::ceil((hi - lo) / h)) + 1;
        if (cells > detail::max_cells_per_axis(n))
            throw std::invalid_argument(
                "mollified_indicator: grid too coarse to resolve eps=" + std::to_string(eps) +
                "; would need " + std::to_string(cells) + " cells per axis (cap " +
                std::to_string(detail::max_cells_per_axis(n)) + ")");
        f.shape[a] = cells;
        f.origin[a] = lo;
    }
    f.values.assign(f.cell_count(), 0.0);
    for (int kk = 0; kk < f.shape[2]; ++kk)
        for (int jj = 0; jj < f.shape[1]; ++jj)
            for (int ii = 0; ii < f.shape[0]; ++ii) {
                double d = k.distance(f.cell_center(ii, jj, kk));
                if (d < eps)
                    f.at(ii, jj, kk) = detail::ramp_profile(1.0 - d / eps, profile, degree);
            }
    return f;
}

/// Seminorm of each family member, in the given eps order (a diagnostic view
/// of the minimization, also used by the perimeter-limit suite).
inline std::vector<std::pair<double, double>> capacity_family_profile(
    const GeometricSet& k, const BesovParams& params, const CapacityFamilyConfig& fam,
    const BesovQuadConfig& quad = {}) {
    fam.validate();
    std::vector<std::pair<double, double>> out;
    if (k.members().empty()) return out;
    for (double eps : fam.eps_grid) {
        GridFunction f = mollified_indicator(k, eps, fam.profile, fam.smooth_degree);
        out.emplace_back(eps, besov_seminorm(f, params, quad));
    }
    return out;
}

/// Upper bound on the variational capacity of K: minimum of ||f_eps||^p over
/// the admissible family (each f_eps >= 1 on K by construction), minimized
/// over eps by grid scan or golden-section on log eps. Returns the bound and
/// the argmin eps. The empty set yields 0 (the zero function is admissible).
inline std::pair<double, double> besov_capacity_upper(const GeometricSet& k,
                                                      const BesovParams& params,
                                                      const CapacityFamilyConfig& fam = {},
                                                      const BesovQuadConfig& quad = {}) {
    fam.validate();
    if (k.members().empty()) return {0.0, 0.0};
    auto value_at = [&](double eps) {
        GridFunction f = mollified_indicator(k, eps, fam.profile, fam.smooth_degree);
        return std::pow(besov_seminorm(f, params, quad), params.p);
    };
    double best = std::numeric_limits<double>::infinity();
    double best_eps = fam.eps_grid.front();
    for (double eps : fam.eps_grid) {
        double v = value_at(eps);
        if (v < best) {
            best = v;
            best_eps = eps;
        }
    }
    if (fam.optimizer == CapacityFamilyConfig::Optimizer::GoldenSection &&
        fam.eps_grid.size() >= 2) {
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = std::log(fam.eps_grid.back());
        double hi = std::log(fam.eps_grid.front());
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = value_at(std::exp(x1)), f2 = value_at(std::exp(x2));
        while (hi - lo > fam.golden_tol) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = value_at(std::exp(x1));
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = value_at(std::exp(x2));
            }
            double cand = std::min(f1, f2);
            double cand_eps = std::exp(f1 < f2 ? x1 : x2);
            if (cand < best) {
                best = cand;
                best_eps = cand_eps;
            }
        }
    }
    return {best, best_eps};
}

/// Netrusov content upper bound: the minimum of (sum_i (m_i 2^{-i d})^theta)^{1/theta}
/// over a generated family of coverings with dyadic radii <= eps:
/// (a) one circumscribing dyadic ball per component, (b) cubic lattice
/// coverings at each admissible dyadic radius, (c) per-component mixtures.
inline double netrusov_upper(const GeometricSet& e, double d, double theta,
                             double eps = std::numeric_limits<double>::infinity()) {
    if (!(d > 0.0) || !(theta > 0.0))
        throw std::invalid_argument("netrusov_upper: d and theta must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("netrusov_upper: eps must be positive");
    if (e.members().empty()) return 0.0;
    const int n = e.dim();
    const long count_cap = 10'000'000;

    // Candidate (bin index i, ball count) options per component.
    struct Option {
        int bin = 0;
        long count = 0;
    };
    const int i_start = std::isinf(eps) ? 0 : std::max(0, int(std::ceil(-std::log2(eps))));
    std::vector<std::vector<Option>> options;
    for (const auto& m : e.members()) {
        std::vector<Option> opts;
        double circ = 0.0;
        AxisBox bb{};
        if (const auto* b = std::get_if<Ball>(&m)) {
            circ = b->radius;
            for (int a = 0; a < n; ++a) {
                bb.lo[a] = b->center[a] - b->radius;
                bb.hi[a] = b->center[a] + b->radius;
            }
        } else {
            const auto& bx = std::get<AxisBox>(m);
            bb = bx;
            double diag2 = 0.0;
            for (int a = 0; a < n; ++a) {
                double half = 0.5 * (bx.hi[a] - bx.lo[a]);
                diag2 += half * half;
            }
            circ = std::sqrt(diag2);
        }
        // (a) one dyadic ball, when a bin radius >= circ is admissible
        if (circ <= std::pow(2.0, -double(i_start)) * (1.0 + 1e-12)) {
            int bin = std::max(i_start, int(std::floor(-std::log2(circ))));
            if (std::pow(2.0, -double(bin)) < circ * (1.0 - 1e-12)) --bin;
            bin = std::max(bin, i_start);
            opts.push_back({bin, 1});
        }
        // (b) lattice coverings at every admissible dyadic radius down to the
        // ball-count budget. The bin range is absolute, so the candidate
        // family for a larger eps always contains the family for a smaller
        // one (the eps-monotonicity property depends on this).
        for (int i = i_start; i <= 40; ++i) {
            double r = std::pow(2.0, -double(i));
            double pitch = 2.0 * r / std::sqrt(double(n));
            long count = 1;
            bool ok = true;
            for (int a = 0; a < n && ok; ++a) {
                long c = long(std::ceil((bb.hi[a] - bb.lo[a]) / pitch)) + 1;
                if (count > count_cap / std::max<long>(1, c)) ok = false;
                count *= std::max<long>(1, c);
            }
            if (!ok) break;
            opts.push_back({i, count});
        }
        if (opts.empty())
            throw std::invalid_argument(
                "netrusov_upper: eps below the resolvable covering radius (lattice at 2^-" +
                std::to_string(i_start) + " exceeds the ball budget of " +
                std::to_string(count_cap) + ")");
        options.push_back(std::move(opts));
    }

    // (c) cross-product of per-component choices (greedy diagonal fallback
    // when the product is large)
    double best = std::numeric_limits<double>::infinity();
    auto evaluate = [&](const std::vector<int>& pick) {
        std::map<int, long> bins;
        for (std::size_t c = 0; c < options.size(); ++c) {
            const Option& o = options[c][pick[c]];
            bins[o.bin] += o.count;
        }
        double acc = 0.0;
        for (const auto& [i, m_i] : bins)
            acc += std::pow(double(m_i) * std::pow(2.0, -double(i) * d), theta);
        return std::pow(acc, 1.0 / theta);
    };
    long combos = 1;
    for (const auto& o : options) combos *= long(o.size());
    if (combos <= 4096) {
        std::vector<int> pick(options.size(), 0);
        for (long c = 0; c < combos; ++c) {
            long rem = c;
            for (std::size_t idx = 0; idx < options.size(); ++idx) {
                pick[idx] = int(rem % long(options[idx].size()));
                rem /= long(options[idx].size());
            }
            best = std::min(best, evaluate(pick));
        }
    } else {
        std::size_t depth = 0;
        for (const auto& o : options) depth = std::max(depth, o.size());
        for (std::size_t k2 = 0; k2 < depth; ++k2) {
            std::vector<int> pick(options.size());
            for (std::size_t idx = 0; idx < options.size(); ++idx)
                pick[idx] = int(std::min(k2, options[idx].size() - 1));
            best = std::min(best, evaluate(pick));
        }
    }
    return best;
}

/// Capacitary Lorentz (Choquet) norm for radial nonincreasing f: superlevel
/// sets are origin-centered balls, so the capacity is evaluated once per
/// distinct radius and combined through the same threshold sum as the
/// measure-based Lorentz norm.
inline double choquet_lorentz_norm(const GridFunction& f, const LorentzParams& lp,
                                   const Content& cap) {
    if (cap.is_measure())
        throw std::invalid_argument(
            "choquet_lorentz_norm: content must be a capacity (use lorentz_norm for measures)");
    if (lp.weak()) throw std::invalid_argument("choquet_lorentz_norm: q0 must be finite");
    if (f.max_abs() == 0.0) return 0.0;

    auto levels = f.distinct_abs_values();
    const double vn = unit_ball_volume(f.dim);
    std::map<long long, double> cache;  // quantized radius -> capacity value
    double acc = 0.0;
    double prev = 0.0;
    for (double t : levels) {
        SuperlevelSet s = superlevel_set(f, 0.5 * (prev + t));
        if (!s.empty()) {
            Vec centroid{};
            for (const auto& c : s.cells) {
                Vec p = s.cell_center(c);
                for (int a = 0; a < f.dim; ++a) centroid[a] += p[a];
            }
            for (int a = 0; a < f.dim; ++a) centroid[a] /= double(s.cells.size());
            if (!s.geometric || norm(centroid, f.dim) > 0.51 * f.spacing)
                throw std::invalid_argument(
                    "choquet_lorentz_norm: f must be radial nonincreasing (superlevel set at t=" +
                    std::to_string(t) + " is not a centered ball)");
            double r = std::pow(s.volume() / vn, 1.0 / f.dim);
            long long key = llround(r * 1e12);
            auto it = cache.find(key);
            double cv = it != cache.end()
                            ? it->second
                            : (cache[key] = cap.evaluate(GeometricSet::ball(f.dim, Vec{}, r)));
            acc += std::pow(cv, lp.q0 / lp.p0) * (std::pow(t, lp.q0) - std::pow(prev, lp.q0));
        }
        prev = t;
    }
    return std::pow(acc, 1.0 / lp.q0);
}

/// Same minimization as besov_capacity_upper but without the (0,1) eps
/// validation; used for diameter-scaled grids.
inline double besov_capacity_upper_scaled(const GeometricSet& k, const BesovParams& params,
                                          const CapacityFamilyConfig& fam,
                                          const BesovQuadConfig& quad) {
    if (k.members().empty()) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (double eps : fam.eps_grid) {
        GridFunction f = mollified_indicator(k, eps, fam.profile, fam.smooth_degree);
        best = std::min(best, std::pow(besov_seminorm(f, params, quad), params.p));
    }
    return best;
}

/// Content backed by the capacity upper bound. With relative_eps the family
/// widths are scaled by the set diameter, which makes the bound exactly
/// dilation-covariant (used by the chain-stability suites).
inline Content make_capacity_content(const BesovParams& params, CapacityFamilyConfig fam = {},
                                     BesovQuadConfig quad = {}, bool relative_eps = false) {
    fam.validate();
    CapacityEstimate ce;
    ce.params = params;
    ce.eval = [params, fam, quad, relative_eps](const GeometricSet& e) {
        CapacityFamilyConfig fc = fam;
        if (relative_eps)
            for (double& eps : fc.eps_grid) eps *= e.diameter();
        return besov_capacity_upper_scaled(e, params, fc, quad);
    };
    return Content(std::move(ce));
}

inline Content make_netrusov_content(double d, double theta,
                                     double eps = std::numeric_limits<double>::infinity()) {
    NetrusovContent nc;
    nc.d = d;
    nc.theta = theta;
    nc.eps = eps;
    nc.eval = [d, theta, eps](const GeometricSet& e) { return netrusov_upper(e, d, theta, eps); };
    return Content(std::move(nc));
}

}  // namespace fraclab
