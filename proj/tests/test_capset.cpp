#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fraclab/capset.hpp"
#include "fraclab/corpus.hpp"

using namespace fraclab;

namespace {

const GeometricSet unit_interval = GeometricSet::box(1, vec1(0.0), vec1(1.0));

/// Exact double-sum of the |1_E(x) - 1_E(y)| kernel route in n=1: all
/// (E-cell, complement-cell) pairs integrate in closed form, the far
/// complement is an analytic tail. Independent of the Monte Carlo path.
double interval_perimeter_double_sum(double beta, int cells, double truncation) {
    const double h = 1.0 / cells;
    const double denom = beta * (1.0 - beta);
    auto pair_integral = [&](double d) {  // left-endpoint distance d >= h
        return (2.0 * std::pow(d, 1.0 - beta) - std::pow(d + h, 1.0 - beta) -
                std::pow(d - h, 1.0 - beta)) /
               denom;
    };
    double acc = 0.0;
    const int comp = int(truncation * cells);
    for (int i = 0; i < cells; ++i)          // cells of E = (0,1)
        for (int j = 1; j <= comp; ++j) {    // complement cells on both sides
            acc += pair_integral((i + j) * h);            // left of 0
            acc += pair_integral((cells - 1 - i + j) * h);  // right of 1
        }
    // analytic tail beyond the truncation distance T = comp * h
    double T = comp * h;
    acc += 2.0 * (std::pow(1.0 + T, 1.0 - beta) - std::pow(T, 1.0 - beta)) / denom;
    return acc;
}

}  // namespace

TEST_CASE("fractional perimeter closed forms") {
    SECTION("unit interval at beta = 1/2, p = q = 1 gives 2/(beta(1-beta)) = 8") {
        auto params = BesovParams::create(0.5, 1.0, 1.0, 1);
        PerimeterMCConfig cfg;
        cfg.outer_samples = 10000;
        cfg.seed = 42;
        auto res = fractional_perimeter(unit_interval, params, cfg);
        CAPTURE(res.value, res.std_error);
        REQUIRE(res.value == Catch::Approx(8.0).epsilon(0.02));
        REQUIRE(res.samples == 10000);
    }

    SECTION("p = q reduction: P^{2,2}_{0.2} = (P^{1,1}_{0.4})^{1/2}") {
        auto params = BesovParams::create(0.2, 2.0, 2.0, 1);
        PerimeterMCConfig cfg;
        cfg.seed = 7;
        auto res = fractional_perimeter(unit_interval, params, cfg);
        double expect = std::sqrt(2.0 / (0.4 * 0.6));
        REQUIRE(res.value == Catch::Approx(expect).epsilon(0.03));
    }

    SECTION("matches the double-sum oracle route") {
        const double beta = 0.5;
        double oracle = interval_perimeter_double_sum(beta, 256, 4.0);
        REQUIRE(oracle == Catch::Approx(2.0 / (beta * (1.0 - beta))).epsilon(1e-9));
        auto params = BesovParams::create(beta, 1.0, 1.0, 1);
        PerimeterMCConfig cfg;
        cfg.seed = 3;
        auto res = fractional_perimeter(unit_interval, params, cfg);
        REQUIRE(res.value == Catch::Approx(oracle).epsilon(0.03));
    }
}

TEST_CASE("fractional perimeter scaling and variants") {
    SECTION("scaling law P(lambda E) = lambda^{n/p - p beta/q} P(E)") {
        struct Case {
            int dim;
            double beta, p, q;
            GeometricSet base, doubled;
        };
        std::vector<Case> cases;
        cases.push_back({1, 0.3, 1.0, 1.0, unit_interval,
                         GeometricSet::box(1, vec1(0.0), vec1(2.0))});
        cases.push_back({1, 0.2, 2.0, 2.0, unit_interval,
                         GeometricSet::box(1, vec1(0.0), vec1(2.0))});
        cases.push_back({2, 0.3, 1.0, 1.0, GeometricSet::ball(2, vec2(0.0, 0.0), 0.5),
                         GeometricSet::ball(2, vec2(0.0, 0.0), 1.0)});
        cases.push_back({3, 0.4, 1.0, 1.0, GeometricSet::ball(3, vec3(0.1, 0.0, -0.1), 0.5),
                         GeometricSet::ball(3, vec3(0.2, 0.0, -0.2), 1.0)});
        for (const auto& c : cases) {
            auto params = BesovParams::create(c.beta, c.p, c.q, c.dim);
            PerimeterMCConfig cfg;
            cfg.seed = 11;
            cfg.outer_samples = 4000;
            double base = fractional_perimeter(c.base, params, cfg).value;
            double big = fractional_perimeter(c.doubled, params, cfg).value;
            double expect = std::pow(2.0, c.dim / c.p - c.p * c.beta / c.q);
            CAPTURE(c.dim, c.beta, c.p, c.q);
            REQUIRE(big / base == Catch::Approx(expect).epsilon(0.03));
        }
    }

    SECTION("disjoint union subtracts the cross interaction") {
        // P(E1 u E2) = P(E1) + P(E2) - 2 J12 with the exact J12 for two
        // unit intervals at distance 1
        const double beta = 0.5;
        double j12 = (2.0 * std::pow(2.0, 1.0 - beta) - std::pow(3.0, 1.0 - beta) - 1.0) /
                     (beta * (1.0 - beta));
        double expect = 2.0 * (2.0 / (beta * (1.0 - beta))) - 2.0 * j12;
        auto u = GeometricSet::disjoint_union(
            1, {AxisBox{vec1(0.0), vec1(1.0)}, AxisBox{vec1(2.0), vec1(3.0)}});
        auto params = BesovParams::create(beta, 1.0, 1.0, 1);
        PerimeterMCConfig cfg;
        cfg.seed = 5;
        auto res = fractional_perimeter(u, params, cfg);
        REQUIRE(res.value == Catch::Approx(expect).epsilon(0.02));
    }

    SECTION("randomized inner scheme agrees with the deterministic one") {
        auto ball = GeometricSet::ball(2, vec2(0.2, -0.1), 0.8);
        auto params = BesovParams::create(0.3, 1.0, 1.0, 2);
        PerimeterMCConfig exact_cfg;
        exact_cfg.seed = 9;
        PerimeterMCConfig mc_cfg = exact_cfg;
        mc_cfg.inner_scheme = PerimeterMCConfig::InnerScheme::MCImportance;
        mc_cfg.inner_samples = 128;
        double a = fractional_perimeter(ball, params, exact_cfg).value;
        double b = fractional_perimeter(ball, params, mc_cfg).value;
        REQUIRE(b == Catch::Approx(a).epsilon(0.02));
    }

    SECTION("identical seeds reproduce bitwise, different seeds agree within 3 sigma") {
        auto params = BesovParams::create(0.5, 1.0, 1.0, 1);
        PerimeterMCConfig cfg;
        cfg.seed = 21;
        auto r1 = fractional_perimeter(unit_interval, params, cfg);
        auto r2 = fractional_perimeter(unit_interval, params, cfg);
        REQUIRE(r1.value == r2.value);
        cfg.threads = 2;  // threading must not change the reduction
        auto r3 = fractional_perimeter(unit_interval, params, cfg);
        REQUIRE(r3.value == r1.value);
    }

    SECTION("divergent parameter combinations are refused") {
        // inner integral diverges at infinity: kernel exponent <= n
        auto be_inner = BesovParams::create(0.5, 1.0, 3.0, 1);
        PerimeterMCConfig cfg;
        REQUIRE_THROWS_AS(fractional_perimeter(unit_interval, be_inner, cfg), std::domain_error);
        // outer integral diverges at the boundary: p beta = 1 at p = q
        auto be_outer = BesovParams::create(0.5, 2.0, 2.0, 1);
        REQUIRE_THROWS_AS(fractional_perimeter(unit_interval, be_outer, cfg), std::domain_error);
        PerimeterMCConfig tiny;
        tiny.outer_samples = 10;
        auto ok = BesovParams::create(0.5, 1.0, 1.0, 1);
        REQUIRE_THROWS_AS(fractional_perimeter(unit_interval, ok, tiny), std::invalid_argument);
    }
}

TEST_CASE("besov capacity upper bounds") {
    auto params = BesovParams::create(0.3, 1.0, 1.0, 1);

    SECTION("empty set has capacity zero") {
        auto [value, eps] = besov_capacity_upper(GeometricSet::empty(1), params);
        REQUIRE(value == 0.0);
    }

    SECTION("monotone on nested balls with the same family") {
        CapacityFamilyConfig fam;
        fam.eps_grid = {0.3, 0.2, 0.1};
        auto small = besov_capacity_upper(GeometricSet::ball(1, vec1(0.0), 0.5), params, fam);
        auto big = besov_capacity_upper(GeometricSet::ball(1, vec1(0.0), 1.0), params, fam);
        REQUIRE(small.first <= big.first * (1.0 + 1e-12));
        REQUIRE(small.first > 0.0);
    }

    SECTION("family values approach twice the perimeter as eps shrinks") {
        CapacityFamilyConfig fam;
        fam.eps_grid = {0.32, 0.16, 0.08, 0.04};
        auto profile = capacity_family_profile(unit_interval, params, fam);
        double target = 2.0 * (2.0 / (0.3 * 0.7));  // 2 P^{1,1}_{0.3}((0,1))
        REQUIRE(profile.size() == 4);
        double prev_gap = std::numeric_limits<double>::infinity();
        for (const auto& [eps, norm_value] : profile) {
            double gap = std::abs(norm_value - target);
            REQUIRE(gap <= prev_gap * (1.0 + 1e-9));  // monotone approach
            prev_gap = gap;
        }
        REQUIRE(profile.back().second == Catch::Approx(target).epsilon(0.05));
    }

    SECTION("golden-section refines the grid minimum") {
        CapacityFamilyConfig grid;
        grid.eps_grid = {0.4, 0.2, 0.1};
        CapacityFamilyConfig golden = grid;
        golden.optimizer = CapacityFamilyConfig::Optimizer::GoldenSection;
        auto ball = GeometricSet::ball(1, vec1(0.0), 0.6);
        auto a = besov_capacity_upper(ball, params, grid);
        auto b = besov_capacity_upper(ball, params, golden);
        REQUIRE(b.first <= a.first * (1.0 + 1e-12));
    }

    SECTION("smooth ramp profiles are admissible too") {
        CapacityFamilyConfig fam;
        fam.eps_grid = {0.2};
        fam.profile = CapacityFamilyConfig::Profile::SmoothPoly;
        fam.smooth_degree = 3;
        auto v = besov_capacity_upper(GeometricSet::ball(1, vec1(0.0), 0.5), params, fam);
        REQUIRE(v.first > 0.0);
        REQUIRE(std::isfinite(v.first));
    }

    SECTION("family config invariants") {
        CapacityFamilyConfig bad;
        bad.eps_grid = {0.1, 0.2};  // must decrease
        REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
        bad.eps_grid = {1.5};
        REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
        bad.eps_grid.clear();
        REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    }

    SECTION("unresolvably small eps is an error naming the required resolution") {
        CapacityFamilyConfig fam;
        fam.eps_grid = {1e-4};
        auto ball2 = GeometricSet::ball(2, vec2(0.0, 0.0), 1.0);
        auto params2 = BesovParams::create(0.3, 1.0, 1.0, 2);
        REQUIRE_THROWS_WITH(besov_capacity_upper(ball2, params2, fam),
                            Catch::Matchers::ContainsSubstring("cells per axis"));
    }

    SECTION("the admissible family really dominates the indicator") {
        auto f = mollified_indicator(unit_interval, 0.25);
        for (int i = 0; i < f.shape[0]; ++i) {
            double x = f.origin[0] + i * f.spacing;
            if (x >= 0.0 && x <= 1.0) REQUIRE(f.at(i) == 1.0);
        }
    }
}

TEST_CASE("netrusov content upper bounds") {
    SECTION("single dyadic ball: the one-ball covering value") {
        auto b = GeometricSet::ball(2, vec2(0.0, 0.0), 0.25);
        REQUIRE(netrusov_upper(b, 1.0, 1.0) == Catch::Approx(0.25));
    }

    SECTION("two disjoint small balls") {
        auto u = GeometricSet::disjoint_union(
            1, {Ball{vec1(-1.0), 0.125}, Ball{vec1(1.0), 0.125}});
        REQUIRE(netrusov_upper(u, 1.0, 1.0) <= 0.25 * (1.0 + 1e-12));
    }

    SECTION("the one-term sum is theta independent") {
        auto b = GeometricSet::ball(1, vec1(0.0), 0.25);
        double v1 = netrusov_upper(b, 1.0, 1.0);
        for (double theta : {2.0, 10.0, 50.0})
            REQUIRE(netrusov_upper(b, 1.0, theta) == Catch::Approx(v1));
    }

    SECTION("smaller eps restricts coverings, so values increase") {
        auto b = GeometricSet::ball(1, vec1(0.2), 0.3);
        double coarse = netrusov_upper(b, 1.0, 1.0, std::numeric_limits<double>::infinity());
        double mid = netrusov_upper(b, 1.0, 1.0, 0.3);
        double fine = netrusov_upper(b, 1.0, 1.0, 0.01);
        REQUIRE(mid >= coarse * (1.0 - 1e-12));
        REQUIRE(fine >= mid * (1.0 - 1e-12));
    }

    SECTION("d above the set dimension drives fine-lattice values down") {
        auto seg = GeometricSet::box(1, vec1(0.0), vec1(1.0));
        REQUIRE(netrusov_upper(seg, 2.0, 1.0) < netrusov_upper(seg, 0.5, 1.0));
    }

    SECTION("theta = 1, d = 1 content of the unit interval is exactly one half") {
        // the one-ball covering at dyadic radius 1/2 beats every lattice
        auto seg = GeometricSet::box(1, vec1(0.0), vec1(1.0));
        REQUIRE(netrusov_upper(seg, 1.0, 1.0) == Catch::Approx(0.5).epsilon(1e-12));
    }

    SECTION("rejects bad parameters and unresolvable eps") {
        auto b = GeometricSet::ball(1, vec1(0.0), 0.25);
        REQUIRE_THROWS_AS(netrusov_upper(b, 0.0, 1.0), std::invalid_argument);
        REQUIRE_THROWS_AS(netrusov_upper(b, 1.0, -1.0), std::invalid_argument);
        REQUIRE_THROWS_WITH(netrusov_upper(b, 1.0, 1.0, 1e-13),
                            Catch::Matchers::ContainsSubstring("resolvable"));
    }
}

TEST_CASE("choquet lorentz norms") {
    Content netrusov = make_netrusov_content(0.7, 1.0);

    SECTION("indicator layer cake against the capacity of the support ball") {
        GridFunction f;
        f.dim = 1;
        f.spacing = 1.0 / 64;
        f.shape = {2 * 66 + 1, 1, 1};
        f.origin[0] = -66.0 / 64.0;
        f.values.assign(f.cell_count(), 0.0);
        for (int i = 0; i < f.shape[0]; ++i)
            if (std::abs(f.origin[0] + i * f.spacing) <= 1.0) f.at(i) = 1.0;
        double r = 0.5 * double(f.support_cell_count()) * f.spacing;  // n=1 volume radius
        double cap = netrusov.evaluate(GeometricSet::ball(1, vec1(0.0), r));
        for (double p0 : {1.0, 2.0}) {
            double v = choquet_lorentz_norm(f, LorentzParams::create(p0, 3.0), netrusov);
            REQUIRE(v == Catch::Approx(std::pow(cap, 1.0 / p0)).epsilon(1e-9));
        }
    }

    SECTION("zero function") {
        GridFunction z;
        z.dim = 1;
        z.spacing = 0.25;
        z.shape = {9, 1, 1};
        z.values.assign(9, 0.0);
        REQUIRE(choquet_lorentz_norm(z, LorentzParams::create(1.0, 2.0), netrusov) == 0.0);
    }

    SECTION("monotone under pointwise domination of radial functions") {
        auto f = make_corpus_entry("tent", 1, 64);
        GridFunction g = f;
        for (double& v : g.values) v *= 1.5;
        auto lp = LorentzParams::create(1.0, 1.0 / 0.7);
        double vf = choquet_lorentz_norm(f, lp, netrusov);
        double vg = choquet_lorentz_norm(g, lp, netrusov);
        REQUIRE(vf <= vg * (1.0 + 1e-12));
        REQUIRE(vf > 0.0);
    }

    SECTION("non-radial input signals the caller") {
        auto f = make_corpus_entry("two_bump", 1, 64);
        REQUIRE_THROWS_WITH(
            choquet_lorentz_norm(f, LorentzParams::create(1.0, 2.0), netrusov),
            Catch::Matchers::ContainsSubstring("radial"));
    }

    SECTION("measures are rejected (use lorentz_norm)") {
        auto f = make_corpus_entry("tent", 1, 64);
        REQUIRE_THROWS_AS(
            choquet_lorentz_norm(f, LorentzParams::create(1.0, 2.0), Content::lebesgue()),
            std::invalid_argument);
    }

    SECTION("capacity contents on unrecognized superlevels signal the caller") {
        auto f = make_corpus_entry("two_bump", 1, 64);
        // two disjoint components: neither box- nor ball-recognizable
        REQUIRE_THROWS_WITH(distribution_value(f, 0.2, netrusov),
                            Catch::Matchers::ContainsSubstring("not evaluable"));
    }

    SECTION("capacitary norm against the Lebesgue one, chain instance") {
        auto f = make_corpus_entry("tent", 1, 64);
        auto params = BesovParams::create(0.3, 1.0, 1.0, 1);
        CapacityFamilyConfig fam;
        fam.eps_grid = {0.3, 0.15};
        Content cap = make_capacity_content(params, fam);
        auto lp = LorentzParams::create(1.0, params.sobolev_exponent());
        double capno = choquet_lorentz_norm(f, lp, cap);
        auto part = LevelPartition::grid_values(f);
        double lebno = lorentz_norm(
            f, LorentzParams::create(params.sobolev_exponent(), params.sobolev_exponent()),
            Content::lebesgue(), part);
        REQUIRE(std::isfinite(capno));
        REQUIRE(capno > 0.0);
        REQUIRE(capno / lebno > 0.0);  // reported ratio of the chain instance
    }
}
