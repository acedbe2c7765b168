#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraclab/besov.hpp"
#include "fraclab/capset.hpp"
#include "fraclab/corpus.hpp"
#include "fraclab/lorentz.hpp"
#include "fraclab/rearrange.hpp"

namespace fraclab {

/// One verified inequality instance. `pass` holds exactly when the check's
/// predicate holds at `tolerance`; ratio = lhs/rhs whenever rhs > 0.
struct CheckReport {
    std::string check_id;
    std::string params;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = std::numeric_limits<double>::quiet_NaN();
    double tolerance = 0.0;
    bool pass = false;
    std::optional<double> stderr_mc;
    std::int64_t runtime_ms = 0;
    std::uint64_t seed = 0;
};

struct SuiteConfig {
    std::vector<std::string> suites;                    // empty list = nothing to run
    CorpusSpec corpus;
    std::vector<std::array<double, 3>> params;          // (beta, p, q) at corpus.dim
    std::map<std::string, double> tolerances;           // suite -> relative tolerance
    BesovQuadConfig quad;                               // zeros select documented defaults
    std::string out_path = "report.json";
    std::string format = "json";
    std::uint64_t seed = 42;
    int threads = 1;

    static SuiteConfig defaults();
};

inline const std::vector<std::string>& suite_catalog() {
    static const std::vector<std::string> ids = {
        "scaling",          "lemma21", "sobolev_chain", "capacitary_chain", "hardy",
        "rearrange",        "coarea",  "perimeter_capacity", "isocap_report"};
    return ids;
}

/// Defaults: 1e-12 slack for exact layer-cake/constant-one identities, 3% for
/// deterministic quadrature comparisons, 5% for chain stability and limits
/// (Monte Carlo rows carry their own 3-sigma band in stderr_mc).
inline std::map<std::string, double> default_tolerances() {
    return {{"scaling", 0.03},       {"lemma21", 1e-12},      {"sobolev_chain", 0.05},
            {"capacitary_chain", 0.05}, {"hardy", 0.05},      {"rearrange", 1e-9},
            {"coarea", 0.05},        {"perimeter_capacity", 0.05}, {"isocap_report", 0.0}};
}

inline SuiteConfig SuiteConfig::defaults() {
    SuiteConfig cfg;
    cfg.suites = suite_catalog();
    cfg.corpus.names = corpus_catalog();
    cfg.corpus.dim = 1;
    cfg.corpus.resolution = 64;
    cfg.corpus.seed = 42;
    cfg.tolerances = default_tolerances();
    return cfg;
}

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::string tuple_str(const BesovParams& bp) {
    return "n=" + std::to_string(bp.dim) + ";beta=" + fmt(bp.beta) + ";p=" + fmt(bp.p) +
           ";q=" + fmt(bp.q);
}

class CheckTimer {
public:
    CheckTimer() : start_(std::chrono::steady_clock::now()) {}
    std::int64_t elapsed_ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

struct SuiteContext {
    const SuiteConfig& cfg;
    std::vector<std::pair<std::string, GridFunction>> corpus;
    std::vector<BesovParams> tuples;
    std::vector<CheckReport>& out;

    double tolerance(const std::string& suite) const {
        auto it = cfg.tolerances.find(suite);
        if (it != cfg.tolerances.end()) return it->second;
        return default_tolerances().at(suite);
    }

    void add(const std::string& id, const std::string& params, double lhs, double rhs,
             double tol, bool pass, const CheckTimer& timer,
             std::optional<double> stderr_mc = std::nullopt) {
        CheckReport r;
        r.check_id = id;
        r.params = params;
        r.lhs = lhs;
        r.rhs = rhs;
        r.ratio = rhs > 0.0 ? lhs / rhs
                            : std::numeric_limits<double>::quiet_NaN();
        r.tolerance = tol;
        r.pass = pass;
        r.stderr_mc = stderr_mc;
        r.runtime_ms = timer.elapsed_ms();
        r.seed = cfg.seed;
        out.push_back(std::move(r));
    }

    /// Ratio stability across dilations: pass when (max-min)/min <= tol over
    /// lambda in {1/2, 1, 2}, with finiteness required.
    void add_stability(const std::string& id, const std::string& params,
                       const std::vector<double>& ratios, double tol, const CheckTimer& timer) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        bool finite = true;
        for (double r : ratios) {
            if (!std::isfinite(r) || r <= 0.0) finite = false;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        bool pass = finite && (hi - lo) / lo <= tol;
        add(id, params, hi, lo, tol, pass, timer);
    }

    bool radial_entry(const std::string& name) const { return name != "two_bump"; }
};

// --- scaling ---------------------------------------------------------------

inline void run_scaling(SuiteContext& ctx) {
    const double tol = ctx.tolerance("scaling");
    const int n = ctx.cfg.corpus.dim;
    for (const auto& bp : ctx.tuples) {
        for (const auto& [name, f] : ctx.corpus) {
            CheckTimer timer;
            double base = besov_seminorm(f, bp, ctx.cfg.quad);
            for (double lambda : {0.5, 2.0}) {
                double lhs = besov_seminorm(dilate(f, lambda), bp, ctx.cfg.quad);
                double rhs = std::pow(lambda, bp.beta - double(n) / bp.p) * base;
                ctx.add("scaling/besov/" + name, tuple_str(bp) + ";lambda=" + fmt(lambda), lhs,
                        rhs, tol, std::abs(lhs / rhs - 1.0) <= tol, timer);
            }
            if (n - bp.p * bp.beta > 0.0) {
                double p0 = bp.sobolev_exponent();
                double q0 = bp.p_or_q();
                auto part = LevelPartition::grid_values(f);
                double lbase = lorentz_norm(f, LorentzParams::create(p0, q0),
                                            Content::lebesgue(), part);
                for (double lambda : {0.5, 2.0}) {
                    auto g = dilate(f, lambda);
                    auto gpart = LevelPartition::grid_values(g);
                    double lhs = lorentz_norm(g, LorentzParams::create(p0, q0),
                                              Content::lebesgue(), gpart);
                    double rhs = std::pow(lambda, -(n - bp.p * bp.beta) / bp.p) * lbase;
                    ctx.add("scaling/lorentz/" + name,
                            tuple_str(bp) + ";q0=" + fmt(q0) + ";lambda=" + fmt(lambda), lhs, rhs,
                            tol, std::abs(lhs / rhs - 1.0) <= tol, timer);
                }
            }
        }
        // perimeter scaling on analytic sets, convergent tuples only
        double a = (n + bp.p * bp.beta) * bp.p / bp.q;
        if (a > n && n * bp.q / bp.p - (n + bp.p * bp.beta) > -1.0) {
            std::vector<std::pair<std::string, GeometricSet>> sets;
            if (n == 1) {
                sets.emplace_back("interval", GeometricSet::box(1, vec1(0.0), vec1(1.0)));
                sets.emplace_back("ball", GeometricSet::ball(1, vec1(0.2), 0.4));
            } else {
                Vec lo{}, hi{};
                for (int axis = 0; axis < n; ++axis) hi[axis] = 1.0;
                sets.emplace_back("box", GeometricSet::box(n, lo, hi));
                sets.emplace_back("ball", GeometricSet::ball(n, Vec{}, 0.5));
            }
            for (const auto& [sname, set] : sets) {
                const GeometricSet& e = set;
                CheckTimer timer;
                PerimeterMCConfig mc;
                mc.seed = ctx.cfg.seed;
                mc.outer_samples = 4000;
                mc.threads = ctx.cfg.threads;
                auto base = fractional_perimeter(e, bp, mc);
                GeometricSet doubled = [&] {
                    if (const auto* b = std::get_if<Ball>(&e.members()[0]))
                        return GeometricSet::ball(n, scale(b->center, 2.0), 2.0 * b->radius);
                    const auto& bx = std::get<AxisBox>(e.members()[0]);
                    return GeometricSet::box(n, scale(bx.lo, 2.0), scale(bx.hi, 2.0));
                }();
                auto big = fractional_perimeter(doubled, bp, mc);
                double expect = std::pow(2.0, double(n) / bp.p - bp.p * bp.beta / bp.q);
                double lhs = big.value / base.value;
                ctx.add("scaling/perimeter/" + sname, tuple_str(bp) + ";lambda=2", lhs, expect,
                        tol, std::abs(lhs / expect - 1.0) <= tol, timer,
                        big.std_error / base.value);
            }
        }
    }
}

// --- lemma21 ----------------------------------------------------------------

inline void run_lemma21(SuiteContext& ctx) {
    const double tol = ctx.tolerance("lemma21");
    std::vector<std::pair<std::string, Content>> contents;
    contents.emplace_back("lebesgue", Content::lebesgue());
    contents.emplace_back("radial0.5", Content::radial_weight(0.5));
    for (const auto& [name, f] : ctx.corpus) {
        auto part = LevelPartition::grid_values(f);
        for (const auto& [cname, nu] : contents)
            for (double p0 : {1.0, 2.0})
                for (double r : {2.0, 4.0}) {
                    CheckTimer timer;
                    double weak = weak_norm(f, p0, nu);
                    double strong = lorentz_norm(f, LorentzParams::create(p0, r), nu, part);
                    ctx.add("lemma21/weak_le_lorentz/" + name,
                            "nu=" + cname + ";p0=" + fmt(p0) + ";r=" + fmt(r), weak, strong, tol,
                            weak <= strong * (1.0 + tol), timer);
                }
        // chain ratio stability: L^{p0,r} / L^{p0,q0} under dilation
        for (double p0 : {1.0, 2.0})
            for (double q0 : {1.0, 2.0})
                for (double r : {2.0, 4.0}) {
                    if (q0 > r) continue;
                    CheckTimer timer;
                    auto ratio_of = [&](const GridFunction& g) {
                        auto gp = LevelPartition::grid_values(g);
                        Content leb = Content::lebesgue();
                        return lorentz_norm(g, LorentzParams::create(p0, r), leb, gp) /
                               lorentz_norm(g, LorentzParams::create(p0, q0), leb, gp);
                    };
                    std::vector<double> ratios = {ratio_of(f), ratio_of(dilate(f, 0.5)),
                                                  ratio_of(dilate(f, 2.0))};
                    ctx.add_stability("lemma21/chain_stability/" + name,
                                      "p0=" + fmt(p0) + ";q0=" + fmt(q0) + ";r=" + fmt(r), ratios,
                                      1e-9, timer);
                }
    }
}

// --- sobolev_chain ----------------------------------------------------------

inline void run_sobolev_chain(SuiteContext& ctx) {
    const double tol = ctx.tolerance("sobolev_chain");
    for (const auto& bp : ctx.tuples) {
        double p0 = bp.sobolev_exponent();  // throws at p = n/beta, naming it
        double q0 = bp.p_or_q();
        for (const auto& [name, f] : ctx.corpus) {
            CheckTimer timer;
            auto ratios_of = [&](const GridFunction& g) {
                auto part = LevelPartition::grid_values(g);
                double a = lp_norm(g, p0);
                double m = lorentz_norm(g, LorentzParams::create(p0, q0), Content::lebesgue(),
                                        part);
                double b = besov_seminorm(g, bp, ctx.cfg.quad);
                return std::pair<double, double>{a / m, m / b};
            };
            auto base = ratios_of(f);
            auto lo = ratios_of(dilate(f, 0.5));
            auto hi = ratios_of(dilate(f, 2.0));
            if (q0 <= p0)
                ctx.add("sobolev_chain/embed_const1/" + name, tuple_str(bp), base.first, 1.0,
                        1e-12, base.first <= 1.0 + 1e-12, timer);
            ctx.add_stability("sobolev_chain/lebesgue_vs_mid/" + name, tuple_str(bp),
                              {base.first, lo.first, hi.first}, tol, timer);
            ctx.add_stability("sobolev_chain/mid_vs_besov/" + name, tuple_str(bp),
                              {base.second, lo.second, hi.second}, tol, timer);
        }
    }
}

// --- capacitary_chain -------------------------------------------------------

inline void run_capacitary_chain(SuiteContext& ctx) {
    const double tol = ctx.tolerance("capacitary_chain");
    if (ctx.cfg.corpus.dim != 1) return;  // radial superlevels at desk scale
    for (const auto& bp : ctx.tuples) {
        if (bp.p != bp.q) continue;
        double p0 = bp.sobolev_exponent();
        CapacityFamilyConfig fam;
        fam.eps_grid = {0.35, 0.18};
        Content cap = make_capacity_content(bp, fam, ctx.cfg.quad, /*relative_eps=*/true);
        auto mid_lp = LorentzParams::create(bp.p, p0);
        for (const auto& [name, f] : ctx.corpus) {
            if (!ctx.radial_entry(name)) continue;
            CheckTimer timer;
            auto ratios_of = [&](const GridFunction& g) {
                double a = lp_norm(g, p0);
                double m = choquet_lorentz_norm(g, mid_lp, cap);
                double b = besov_seminorm(g, bp, ctx.cfg.quad);
                return std::pair<double, double>{a / m, m / b};
            };
            auto base = ratios_of(f);
            auto lo = ratios_of(dilate(f, 0.5));
            auto hi = ratios_of(dilate(f, 2.0));
            ctx.add_stability("capacitary_chain/lebesgue_vs_choquet/" + name, tuple_str(bp),
                              {base.first, lo.first, hi.first}, tol, timer);
            ctx.add_stability("capacitary_chain/choquet_vs_besov/" + name, tuple_str(bp),
                              {base.second, lo.second, hi.second}, tol, timer);
        }
    }
}

// --- hardy -------------------------------------------------------------------

inline void run_hardy(SuiteContext& ctx) {
    const double tol = ctx.tolerance("hardy");
    const int n = ctx.cfg.corpus.dim;
    for (const auto& bp : ctx.tuples) {
        (void)bp.sobolev_exponent();  // gamma < n needs p < n/beta; error names it
        double s = bp.p_or_q();
        double gamma = n * (1.0 - s / bp.p) + bp.beta * s;
        for (const auto& [name, f] : ctx.corpus) {
            CheckTimer timer;
            auto ratio_of = [&](const GridFunction& g) {
                return std::pow(weighted_integral(g, s, gamma), 1.0 / s) /
                       besov_seminorm(g, bp, ctx.cfg.quad);
            };
            ctx.add_stability("hardy/weighted_vs_besov/" + name,
                              tuple_str(bp) + ";gamma=" + fmt(gamma),
                              {ratio_of(f), ratio_of(dilate(f, 0.5)), ratio_of(dilate(f, 2.0))},
                              tol, timer);
            double direct = weighted_integral(f, s, gamma);
            double symmetric = weighted_integral(rearrange(f), s, gamma);
            ctx.add("hardy/rearrangement_dominates/" + name,
                    tuple_str(bp) + ";gamma=" + fmt(gamma), direct, symmetric, 1e-9,
                    direct <= symmetric * (1.0 + 1e-9), timer);
            if (bp.p == bp.q) {
                double c = std::pow(unit_sphere_area(n) *
                                        std::pow(unit_ball_volume(n),
                                                 -(n - bp.p * bp.beta) / n) /
                                        (n - bp.p * bp.beta),
                                    1.0 / bp.p);
                double lhs = std::pow(weighted_integral(rearrange(f), bp.p, bp.p * bp.beta),
                                      1.0 / bp.p);
                auto part = LevelPartition::grid_values(f);
                double rhs = c * lorentz_norm(f, LorentzParams::create(bp.sobolev_exponent(),
                                                                       bp.p),
                                              Content::lebesgue(), part);
                double id_tol = std::min(tol, 0.03);
                ctx.add("hardy/rearrangement_identity/" + name, tuple_str(bp), lhs, rhs, id_tol,
                        std::abs(lhs / rhs - 1.0) <= id_tol, timer);
            }
        }
    }
}

// --- rearrange ----------------------------------------------------------------

inline void run_rearrange(SuiteContext& ctx) {
    const double slack = ctx.tolerance("rearrange");
    for (const auto& [name, f] : ctx.corpus) {
        CheckTimer timer;
        auto rep = equimeasurable(f, rearrange(f));
        ctx.add("rearrange/equimeasurable/" + name, "resolution=" +
                    std::to_string(ctx.cfg.corpus.resolution),
                rep.max_deviation, f.cell_volume(), slack,
                rep.max_deviation <= f.cell_volume() * (1.0 + slack), timer);

        GridFunction sq = f;
        for (double& v : sq.values) v = v * v;
        auto direct = rearrange(sq);
        auto composed = rearrange(f).pow(2.0);
        double dev = 0.0;
        for (double r = 0.5 * f.spacing; r < 1.5; r += f.spacing)
            dev = std::max(dev, std::abs(direct.value_at(r) - composed.value_at(r)));
        ctx.add("rearrange/power_composition/" + name, "s=2", dev, f.spacing, slack,
                dev <= f.spacing * (1.0 + slack), timer);

        // report-only: the seminorm of f# against the seminorm of f (the
        // contraction property needs function-space limits, so the ratio is
        // surfaced rather than asserted)
        if (!ctx.tuples.empty()) {
            const auto& bp = ctx.tuples.front();
            double num = besov_seminorm(digitize(rearrange(f), f.spacing), bp, ctx.cfg.quad);
            double den = besov_seminorm(f, bp, ctx.cfg.quad);
            ctx.add("rearrange/besov_of_rearrangement/" + name,
                    tuple_str(bp) + ";report_only=true", num, den, 0.0, true, timer);
        }
    }
    for (std::size_t i = 0; i < ctx.corpus.size(); ++i)
        for (std::size_t j = i; j < ctx.corpus.size(); ++j) {
            CheckTimer timer;
            auto [direct, rearranged] =
                riesz_pairing(ctx.corpus[i].second, ctx.corpus[j].second);
            ctx.add("rearrange/riesz/" + ctx.corpus[i].first + "-" + ctx.corpus[j].first, "",
                    direct, rearranged, slack,
                    direct <= rearranged + slack * std::max(1.0, rearranged), timer);
        }
}

// --- coarea --------------------------------------------------------------------

inline void run_coarea(SuiteContext& ctx) {
    const double tol = ctx.tolerance("coarea");
    if (ctx.cfg.corpus.dim != 1) return;
    double beta = 0.3;
    for (const auto& bp : ctx.tuples)
        if (bp.p == 1.0 && bp.q == 1.0 && bp.beta < 1.0) beta = bp.beta;
    auto bp = BesovParams::create(beta, 1.0, 1.0, 1);
    PerimeterMCConfig mc;
    mc.seed = ctx.cfg.seed;
    mc.outer_samples = 2000;
    mc.threads = ctx.cfg.threads;
    for (const auto& [name, f] : ctx.corpus) {
        if (!ctx.radial_entry(name)) continue;
        CheckTimer timer;
        double lhs = besov_seminorm(f, bp, ctx.cfg.quad);
        auto levels = f.distinct_abs_values();
        double rhs = 0.0, err = 0.0, prev = 0.0;
        std::map<long long, PerimeterResult> cache;
        for (double t : levels) {
            auto s = superlevel_set(f, 0.5 * (prev + t), false);
            if (!s.empty()) {
                double r = 0.5 * s.volume();  // n = 1 ball radius
                long long key = llround(r * 1e12);
                auto it = cache.find(key);
                if (it == cache.end())
                    it = cache.emplace(key, fractional_perimeter(
                                                GeometricSet::ball(1, Vec{}, r), bp, mc))
                             .first;
                rhs += 2.0 * it->second.value * (t - prev);
                err += 2.0 * it->second.std_error * (t - prev);
            }
            prev = t;
        }
        ctx.add("coarea/besov_eq_2intP/" + name, tuple_str(bp), lhs, rhs, tol,
                rhs > 0.0 && std::abs(lhs / rhs - 1.0) <= tol, timer, err);
    }
}

// --- perimeter_capacity ----------------------------------------------------------

inline void run_perimeter_capacity(SuiteContext& ctx) {
    const double tol = ctx.tolerance("perimeter_capacity");
    if (ctx.cfg.corpus.dim != 1) return;
    double beta = 0.3;
    for (const auto& bp : ctx.tuples)
        if (bp.p == 1.0 && bp.q == 1.0 && bp.beta < 1.0) beta = bp.beta;
    auto bp = BesovParams::create(beta, 1.0, 1.0, 1);
    CheckTimer timer;
    auto k = GeometricSet::box(1, vec1(0.0), vec1(1.0));
    CapacityFamilyConfig fam;
    fam.eps_grid = {0.32, 0.16, 0.08, 0.04, 0.02};
    auto profile = capacity_family_profile(k, bp, fam, ctx.cfg.quad);
    PerimeterMCConfig mc;
    mc.seed = ctx.cfg.seed;
    mc.threads = ctx.cfg.threads;
    auto per = fractional_perimeter(k, bp, mc);
    double target = 2.0 * per.value;
    bool monotone = true;
    for (std::size_t i = 1; i < profile.size(); ++i)
        if (std::abs(profile[i].second - target) >
            std::abs(profile[i - 1].second - target) * (1.0 + 1e-9))
            monotone = false;
    double lhs = profile.back().second;
    ctx.add("perimeter_capacity/family_limit",
            tuple_str(bp) + ";eps_min=" + fmt(profile.back().first) +
                ";monotone=" + (monotone ? "true" : "false"),
            lhs, target, tol, std::abs(lhs / target - 1.0) <= tol, timer,
            2.0 * per.std_error);
}

// --- isocap_report -----------------------------------------------------------------

inline void run_isocap_report(SuiteContext& ctx) {
    const int n = ctx.cfg.corpus.dim;
    std::vector<std::pair<std::string, GeometricSet>> sets;
    sets.emplace_back("ball", GeometricSet::ball(n, Vec{}, 0.5));
    {
        Vec lo{}, hi{};
        for (int a = 0; a < n; ++a) hi[a] = 1.0;
        sets.emplace_back("box", GeometricSet::box(n, lo, hi));
    }
    if (n == 1)
        sets.emplace_back("union", GeometricSet::disjoint_union(
                                       1, {Ball{vec1(-0.6), 0.25}, Ball{vec1(0.6), 0.25}}));
    for (const auto& bp : ctx.tuples) {
        if (bp.p != bp.q) continue;
        if (!(n - bp.p * bp.beta > 0.0)) continue;
        for (const auto& [sname, e] : sets) {
            CheckTimer timer;
            double lhs = std::pow(e.volume(), (n - bp.p * bp.beta) / n);
            CapacityFamilyConfig fam;
            fam.eps_grid = {0.3, 0.15};
            auto [cap, eps] = besov_capacity_upper(e, bp, fam);
            ctx.add("isocap_report/volume_vs_capacity/" + sname,
                    tuple_str(bp) + ";one_sided_bound=true;argmin_eps=" + fmt(eps), lhs, cap,
                    0.0, true, timer);
        }
    }
}

}  // namespace detail

/// Runs the selected suites against the configured corpus. Reports are sorted
/// by (suite, corpus entry, params); every configured parameter tuple is
/// validated up front so regime violations fail loudly with the constraint
/// named.
inline std::vector<CheckReport> run_suite(const SuiteConfig& cfg) {
    for (const auto& s : cfg.suites) {
        const auto& ids = suite_catalog();
        if (std::find(ids.begin(), ids.end(), s) == ids.end()) {
            std::string known;
            for (const auto& id : ids) known += (known.empty() ? "" : ", ") + id;
            throw std::invalid_argument("run_suite: unknown suite '" + s + "' (catalog: " + known +
                                        ")");
        }
    }
    for (const auto& [suite, tol] : cfg.tolerances)
        if (!(tol >= 0.0))
            throw std::invalid_argument("run_suite: tolerance for '" + suite +
                                        "' must be nonnegative");

    std::vector<CheckReport> reports;
    if (cfg.suites.empty()) return reports;

    detail::SuiteContext ctx{cfg, make_corpus(cfg.corpus), {}, reports};
    std::vector<std::array<double, 3>> tuples = cfg.params;
    if (tuples.empty()) {
        if (cfg.corpus.dim == 1)
            tuples = {{0.3, 1.0, 1.0}, {0.45, 1.5, 1.5}, {0.6, 1.0, 2.0}, {0.5, 0.8, 0.8}};
        else if (cfg.corpus.dim == 2)
            tuples = {{0.5, 1.0, 1.0}, {0.4, 1.5, 2.0}};
        else
            tuples = {{0.5, 1.0, 1.0}};
    }
    for (const auto& [beta, p, q] : tuples)
        ctx.tuples.push_back(BesovParams::create(beta, p, q, cfg.corpus.dim));

    for (const auto& suite : cfg.suites) {
        if (suite == "scaling") detail::run_scaling(ctx);
        else if (suite == "lemma21") detail::run_lemma21(ctx);
        else if (suite == "sobolev_chain") detail::run_sobolev_chain(ctx);
        else if (suite == "capacitary_chain") detail::run_capacitary_chain(ctx);
        else if (suite == "hardy") detail::run_hardy(ctx);
        else if (suite == "rearrange") detail::run_rearrange(ctx);
        else if (suite == "coarea") detail::run_coarea(ctx);
        else if (suite == "perimeter_capacity") detail::run_perimeter_capacity(ctx);
        else if (suite == "isocap_report") detail::run_isocap_report(ctx);
    }

    std::stable_sort(reports.begin(), reports.end(), [](const CheckReport& a, const CheckReport& b) {
        if (a.check_id != b.check_id) return a.check_id < b.check_id;
        return a.params < b.params;
    });
    return reports;
}

namespace detail {

inline nlohmann::ordered_json check_to_json(const CheckReport& r, bool timings) {
    nlohmann::ordered_json j;
    j["check_id"] = r.check_id;
    j["params"] = r.params;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    if (std::isfinite(r.ratio))
        j["ratio"] = r.ratio;
    else
        j["ratio"] = nullptr;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    if (r.stderr_mc)
        j["stderr_mc"] = *r.stderr_mc;
    else
        j["stderr_mc"] = nullptr;
    if (timings)
        j["runtime_ms"] = r.runtime_ms;
    else
        j["runtime_ms"] = nullptr;
    j["seed"] = r.seed;
    return j;
}

}  // namespace detail

/// Stable JSON rendering: fixed field order, versioned schema, config echo.
/// Timings are opt-in because wall-clock times would break the byte-level
/// determinism contract of reports.
inline std::string report_to_json(const std::vector<CheckReport>& reports,
                                  const SuiteConfig* cfg = nullptr, bool timings = false) {
    nlohmann::ordered_json top;
    top["version"] = "1";
    nlohmann::ordered_json echo;
    if (cfg) {
        echo["suites"] = cfg->suites;
        echo["corpus_names"] = cfg->corpus.names;
        echo["corpus_dim"] = cfg->corpus.dim;
        echo["corpus_resolution"] = cfg->corpus.resolution;
        nlohmann::ordered_json tuples = nlohmann::ordered_json::array();
        for (const auto& t : cfg->params) tuples.push_back({t[0], t[1], t[2]});
        echo["params"] = tuples;
        echo["tolerances"] = cfg->tolerances;
        echo["seed"] = cfg->seed;
    }
    top["config_echo"] = echo;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    std::size_t passed = 0;
    for (const auto& r : reports) {
        checks.push_back(detail::check_to_json(r, timings));
        passed += r.pass;
    }
    top["checks"] = checks;
    top["summary"] = {{"total", reports.size()}, {"passed", passed}};
    return top.dump(2) + "\n";
}

/// CSV rendering: one row per check, documented column order.
inline std::string report_to_csv(const std::vector<CheckReport>& reports, bool timings = false) {
    std::ostringstream out;
    out << "check_id,params,lhs,rhs,ratio,tolerance,pass,stderr_mc,runtime_ms,seed\n";
    char buf[64];
    auto num = [&](double v) {
        if (!std::isfinite(v)) return std::string();
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (const auto& r : reports) {
        out << r.check_id << ",\"" << r.params << "\"," << num(r.lhs) << ',' << num(r.rhs) << ','
            << num(r.ratio) << ',' << num(r.tolerance) << ',' << (r.pass ? "true" : "false")
            << ',' << (r.stderr_mc ? num(*r.stderr_mc) : std::string()) << ','
            << (timings ? std::to_string(r.runtime_ms) : std::string()) << ',' << r.seed << '\n';
    }
    return out.str();
}

inline void emit_report(const std::vector<CheckReport>& reports, const std::string& format,
                        const std::string& path, const SuiteConfig* cfg = nullptr,
                        bool timings = false) {
    std::string body;
    if (format == "json")
        body = report_to_json(reports, cfg, timings);
    else if (format == "csv")
        body = report_to_csv(reports, timings);
    else
        throw std::invalid_argument("emit_report: format must be json or csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_report: cannot open '" + path + "' for writing");
    out << body;
    if (!out) throw std::runtime_error("emit_report: write failed for '" + path + "'");
}

// --- config file ------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace detail

/// Flat key = value format mirroring SuiteConfig; '#' starts a comment and
/// unknown keys are errors. Lists are comma separated; parameter tuples are
/// beta:p:q triples.
inline SuiteConfig parse_config_text(const std::string& text) {
    SuiteConfig cfg = SuiteConfig::defaults();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key == "suites") {
            cfg.suites = detail::split_list(value);
        } else if (key == "corpus_names") {
            cfg.corpus.names = detail::split_list(value);
        } else if (key == "corpus_dim") {
            cfg.corpus.dim = std::stoi(value);
        } else if (key == "corpus_resolution") {
            cfg.corpus.resolution = std::stoi(value);
        } else if (key == "params") {
            cfg.params.clear();
            for (const auto& item : detail::split_list(value)) {
                std::array<double, 3> t{};
                if (std::sscanf(item.c_str(), "%lf:%lf:%lf", &t[0], &t[1], &t[2]) != 3)
                    throw std::invalid_argument("config line " + std::to_string(lineno) +
                                                ": params entries must be beta:p:q");
                cfg.params.push_back(t);
            }
        } else if (key == "out") {
            cfg.out_path = value;
        } else if (key == "format") {
            if (value != "json" && value != "csv")
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": format must be json or csv");
            cfg.format = value;
        } else if (key == "seed") {
            cfg.seed = std::stoull(value);
            cfg.corpus.seed = cfg.seed;
        } else if (key == "threads") {
            cfg.threads = std::stoi(value);
        } else if (key == "besov_radial_points") {
            cfg.quad.radial_points = std::stoi(value);
        } else if (key == "besov_angular_points") {
            cfg.quad.angular_points = std::stoi(value);
        } else if (key == "besov_r_min") {
            cfg.quad.r_min = std::stod(value);
        } else if (key == "besov_r_max") {
            cfg.quad.r_max = std::stod(value);
        } else if (key == "besov_tail_correction") {
            if (value != "true" && value != "false")
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": besov_tail_correction must be true or false");
            cfg.quad.tail_correction = value == "true";
        } else if (key.rfind("tolerance_", 0) == 0) {
            cfg.tolerances[key.substr(10)] = std::stod(value);
        } else {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

inline SuiteConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace fraclab
