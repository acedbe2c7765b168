#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fraclab/content.hpp"
#include "fraclab/grid_function.hpp"
#include "fraclab/params.hpp"

namespace fraclab {

/// Threshold partition 0 < t_1 < ... < t_m covering (0, max|f|]. GridValues
/// lists every distinct sample magnitude, which makes t-integrals exact for
/// digitized functions; LogUniform(m) spans six decades below max|f|.
struct LevelPartition {
    enum class Scheme { GridValues, LogUniform };

    std::vector<double> levels;
    Scheme scheme = Scheme::GridValues;

    static LevelPartition grid_values(const GridFunction& f) {
        LevelPartition p;
        p.scheme = Scheme::GridValues;
        p.levels = f.distinct_abs_values();
        return p;
    }

    static LevelPartition log_uniform(const GridFunction& f, int m) {
        if (m < 2) throw std::invalid_argument("LevelPartition: LogUniform needs m >= 2");
        LevelPartition p;
        p.scheme = Scheme::LogUniform;
        double top = f.max_abs();
        if (top == 0.0) return p;
        double lo = top * 1e-6;
        for (int i = 0; i < m; ++i)
            p.levels.push_back(lo * std::pow(top / lo, double(i) / (m - 1)));
        p.levels.back() = top;
        return p;
    }

    void validate(const GridFunction& f) const {
        if (f.max_abs() == 0.0) return;
        if (levels.empty()) throw std::invalid_argument("LevelPartition: empty partition");
        for (std::size_t i = 1; i < levels.size(); ++i)
            if (!(levels[i - 1] < levels[i]))
                throw std::invalid_argument("LevelPartition: levels must be strictly increasing");
        if (levels.front() <= 0.0)
            throw std::invalid_argument("LevelPartition: levels must be positive");
        if (levels.back() < f.max_abs() * (1.0 - 1e-12))
            throw std::invalid_argument("LevelPartition: top level must reach max|f|");
    }
};

/// nu(O_t(f)) for the strict superlevel set O_t = {|f| > t}.
inline double distribution_value(const GridFunction& f, double t, const Content& nu) {
    if (!(t > 0.0)) throw std::invalid_argument("distribution_value: t must be positive");
    return nu.evaluate(superlevel_set(f, t, nu.needs_geometric()));
}

/// (int_0^infty nu(O_t(f))^{q0/p0} dt^{q0})^{1/q0}, with dt^{q0} read as
/// q0 t^{q0-1} dt. Computed exactly on the piecewise-constant-in-t
/// distribution induced by the partition: sum_j nu_j^{q0/p0} (t_j^{q0} -
/// t_{j-1}^{q0}) where nu_j is the distribution value on (t_{j-1}, t_j].
inline double lorentz_norm(const GridFunction& f, const LorentzParams& lp, const Content& nu,
                           const LevelPartition& part) {
    if (lp.weak())
        throw std::invalid_argument("lorentz_norm: q0 = INFINITY; use weak_norm instead");
    if (!(lp.p0 > 0.0) || !(lp.q0 > 0.0))
        throw std::invalid_argument("lorentz_norm: exponents must be positive");
    if (f.max_abs() == 0.0) return 0.0;
    part.validate(f);
    double acc = 0.0, comp = 0.0;
    double prev = 0.0;
    for (double t : part.levels) {
        double mid = 0.5 * (prev + t);
        double nu_j = distribution_value(f, mid, nu);
        if (nu_j > 0.0) {
            double term = std::pow(nu_j, lp.q0 / lp.p0) *
                          (std::pow(t, lp.q0) - std::pow(prev, lp.q0));
            double s = acc + term;
            comp += (std::abs(acc) >= std::abs(term)) ? (acc - s) + term : (term - s) + acc;
            acc = s;
        }
        prev = t;
    }
    return std::pow(acc + comp, 1.0 / lp.q0);
}

/// sup_{s>0} s * nu(O_s(f))^{1/p0}. For piecewise-constant f the supremum is
/// attained as s approaches a sample magnitude from below, so it suffices to
/// scan the GridValues partition.
inline double weak_norm(const GridFunction& f, double p0, const Content& nu) {
    if (!(p0 > 0.0)) throw std::invalid_argument("weak_norm: p0 must be positive");
    if (f.max_abs() == 0.0) return 0.0;
    auto part = LevelPartition::grid_values(f);
    double best = 0.0;
    double prev = 0.0;
    for (double t : part.levels) {
        double nu_j = distribution_value(f, 0.5 * (prev + t), nu);
        best = std::max(best, t * std::pow(nu_j, 1.0 / p0));
        prev = t;
    }
    return best;
}

}  // namespace fraclab
