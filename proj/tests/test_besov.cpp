#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fraclab/besov.hpp"
#include "fraclab/corpus.hpp"
#include "fraclab/rng.hpp"

using namespace fraclab;

namespace {

GridFunction sample_1d(double lo, double hi, double spacing, double (*fn)(double)) {
    GridFunction f;
    f.dim = 1;
    f.spacing = spacing;
    int m = int(std::llround((hi - lo) / spacing));
    f.shape = {m + 5, 1, 1};
    f.origin[0] = lo - 2.0 * spacing;
    f.values.assign(f.cell_count(), 0.0);
    for (int i = 0; i < f.shape[0]; ++i) {
        double x = f.origin[0] + i * spacing;
        if (x >= lo - 1e-12 && x <= hi + 1e-12) f.at(i) = fn(x);
    }
    return f;
}

/// Brute-force 1-D seminorm oracle: every lattice shift in both directions,
/// midpoint radial weights, analytic disjoint-support tail. Kept independent
/// of the production quadrature (no panelization, no head extrapolation).
double besov_oracle_1d(const GridFunction& f, double beta, double p, double q, int k) {
    const double h = f.spacing;
    const double diam = f.support_diameter();
    const int m_max = int(std::ceil(3.0 * diam / h));
    double total = 0.0;
    for (int sign : {-1, +1}) {
        for (int m = 1; m <= m_max; ++m) {
            double acc = 0.0;
            for (int i = -k * m_max - 2; i < f.shape[0] + k * m_max + 2; ++i) {
                double d = 0.0;
                double c = 1.0;
                for (int j = 0; j <= k; ++j) {
                    d += ((k - j) % 2 == 0 ? c : -c) * f.at_extended(i + j * sign * m);
                    c = c * (k - j) / (j + 1);
                }
                acc += std::pow(std::abs(d), p);
            }
            double lpn = std::pow(acc * h, 1.0 / p);
            total += std::pow(lpn, q) * std::pow(m * h, -1.0 - beta * q) * h;
        }
    }
    // analytic tail: the k+1 shifted copies are disjoint beyond the support
    double binom_acc = 0.0, c = 1.0;
    for (int j = 0; j <= k; ++j) {
        binom_acc += std::pow(c, p);
        c = c * (k - j) / (j + 1);
    }
    double plateau = std::pow(binom_acc, 1.0 / p) * lp_norm(f, p);
    total += 2.0 * std::pow(plateau, q) * std::pow((m_max + 0.5) * h, -beta * q) / (beta * q);
    return std::pow(total, 1.0 / q);
}

}  // namespace

TEST_CASE("finite differences") {
    SECTION("difference of a constant vanishes on the support interior") {
        auto f = sample_1d(-1.0, 1.0, 1.0 / 16, [](double) { return 3.0; });
        auto d = finite_difference(f, vec1(2.0 / 16), 1);
        for (int i = 0; i < d.shape[0]; ++i) {
            double x = d.origin[0] + i * d.spacing;
            if (std::abs(x) <= 0.5) REQUIRE(d.at(i) == 0.0);
        }
    }

    SECTION("first difference of an affine sample is constant h") {
        auto f = sample_1d(-2.0, 2.0, 0.05, [](double x) { return x; });
        auto d = finite_difference(f, vec1(0.1), 1);
        for (int i = 0; i < d.shape[0]; ++i) {
            double x = d.origin[0] + i * d.spacing;
            if (std::abs(x) <= 1.0) REQUIRE(d.at(i) == Catch::Approx(0.1).epsilon(1e-12));
        }
    }

    SECTION("second difference of a quadratic is 2 h^2") {
        auto f = sample_1d(-2.0, 2.0, 0.05, [](double x) { return x * x; });
        auto d = finite_difference(f, vec1(0.5), 2);
        for (int i = 0; i < d.shape[0]; ++i) {
            double x = d.origin[0] + i * d.spacing;
            if (std::abs(x) <= 0.5) REQUIRE(d.at(i) == Catch::Approx(0.5).epsilon(1e-12));
        }
    }

    SECTION("shift snapping and errors") {
        auto f = sample_1d(-1.0, 1.0, 0.1, [](double) { return 1.0; });
        REQUIRE_THROWS_AS(finite_difference(f, vec1(std::nan("")), 1), std::invalid_argument);
        REQUIRE_THROWS_AS(finite_difference(f, vec1(0.1), 0), std::invalid_argument);
        // a shift beyond the bounding box is returned, not an error
        auto d = finite_difference(f, vec1(10.0), 1);
        REQUIRE(lp_norm(d, 1.0) == Catch::Approx(2.0 * lp_norm(f, 1.0)));
    }
}

TEST_CASE("lp norms") {
    SECTION("unit indicator") {
        auto f = sample_1d(0.0, 1.0, 1.0 / 32, [](double) { return 1.0; });
        // 33 samples at spacing 1/32 cover [0 - h/2, 1 + h/2]: trim to exactly 32 cells
        int ones = 0;
        for (double v : f.values) ones += v != 0.0;
        REQUIRE(ones == 33);
        f.values[2] = 0.0;  // drop one boundary cell: 32 cells of width 1/32
        REQUIRE(lp_norm(f, 2.0) == Catch::Approx(1.0));
    }

    SECTION("step function") {
        auto f = sample_1d(0.0, 3.0, 1.0 / 16, [](double) { return 2.0; });
        f.values[2] = 0.0;
        REQUIRE(lp_norm(f, 1.0) == Catch::Approx(6.0));
    }

    SECTION("matches a brute-force sum on random data") {
        GridFunction f;
        f.dim = 2;
        f.spacing = 0.125;
        f.shape = {18, 18, 1};
        f.values.assign(f.cell_count(), 0.0);
        detail::Substream rng(123, 0);
        for (int j = 1; j < 17; ++j)
            for (int i = 1; i < 17; ++i) f.at(i, j) = rng.uniform01() * 2.0 - 1.0;
        for (double p : {0.7, 1.0, 2.0, 3.5}) {
            double acc = 0.0;
            for (double v : f.values) acc += std::pow(std::abs(v), p);
            double expect = std::pow(acc * 0.125 * 0.125, 1.0 / p);
            REQUIRE(lp_norm(f, p) == Catch::Approx(expect).epsilon(1e-12));
        }
    }

    SECTION("rejects bad inputs") {
        auto f = sample_1d(0.0, 1.0, 0.1, [](double) { return 1.0; });
        REQUIRE_THROWS_AS(lp_norm(f, 0.0), std::invalid_argument);
        f.values[3] = std::numeric_limits<double>::infinity();
        REQUIRE_THROWS_AS(lp_norm(f, 1.0), std::invalid_argument);
    }
}

TEST_CASE("besov seminorm") {
    SECTION("zero function") {
        GridFunction z;
        z.dim = 1;
        z.spacing = 0.1;
        z.shape = {16, 1, 1};
        z.values.assign(16, 0.0);
        auto params = BesovParams::create(0.5, 1.0, 1.0, 1);
        REQUIRE(besov_seminorm(z, params) == 0.0);
    }

    SECTION("dilation ratio at the scale-invariant point beta = n/p") {
        auto f = make_corpus_entry("tent", 1, 64);
        auto params = BesovParams::create(0.5, 2.0, 2.0, 1);
        double base = besov_seminorm(f, params);
        double dilated = besov_seminorm(dilate(f, 2.0), params);
        REQUIRE(dilated / base == Catch::Approx(1.0).epsilon(0.03));
    }

    SECTION("matches the brute-force double-sum oracle at double resolution") {
        auto params = BesovParams::create(0.3, 1.0, 1.0, 1);
        auto f_fine = make_corpus_entry("bump", 1, 128);
        double oracle = besov_oracle_1d(f_fine, 0.3, 1.0, 1.0, 1);
        auto f = make_corpus_entry("bump", 1, 64);
        double value = besov_seminorm(f, params);
        CAPTURE(oracle, value);
        REQUIRE(value == Catch::Approx(oracle).epsilon(0.02));
    }

    SECTION("dilation covariance across the corpus") {
        std::vector<BesovParams> tuples = {
            BesovParams::create(0.3, 1.0, 1.0, 1),
            BesovParams::create(0.6, 1.5, 2.0, 1),
            BesovParams::create(0.5, 0.8, 0.8, 1),  // regime B quasi-norm
        };
        for (const auto& params : tuples)
            for (const auto& name : corpus_catalog()) {
                auto f = make_corpus_entry(name, 1, 64);
                double base = besov_seminorm(f, params);
                for (double lambda : {0.5, 2.0}) {
                    double expect =
                        std::pow(lambda, params.beta - params.dim / params.p) * base;
                    double got = besov_seminorm(dilate(f, lambda), params);
                    CAPTURE(name, params.beta, params.p, lambda);
                    REQUIRE(got == Catch::Approx(expect).epsilon(0.03));
                }
            }
    }

    SECTION("homogeneity in the function argument") {
        auto f = make_corpus_entry("two_bump", 1, 64);
        for (auto params : {BesovParams::create(0.3, 1.0, 2.0, 1),
                            BesovParams::create(0.5, 0.8, 0.8, 1)}) {
            double base = besov_seminorm(f, params);
            GridFunction g = f;
            for (double& v : g.values) v *= -2.5;
            REQUIRE(besov_seminorm(g, params) == Catch::Approx(2.5 * base).epsilon(1e-12));
        }
    }

    SECTION("values settle under grid refinement") {
        auto params = BesovParams::create(0.3, 1.0, 1.0, 1);
        double prev = 0.0;
        double prev_change = std::numeric_limits<double>::infinity();
        for (int res : {32, 64, 128, 256}) {
            double v = besov_seminorm(make_corpus_entry("bump", 1, res), params);
            if (prev > 0.0) {
                double change = std::abs(v - prev) / prev;
                REQUIRE(change < 0.01);
                REQUIRE(change <= prev_change * (1.0 + 1e-9));
                prev_change = change;
            }
            prev = v;
        }
    }

    SECTION("refinement converges (Cauchy check)") {
        auto f = make_corpus_entry("plateau", 2, 32);
        auto params = BesovParams::create(0.4, 1.0, 1.0, 2);
        BesovQuadConfig c1, c2, c3;
        c1.radial_points = 32;
        c1.angular_points = 8;
        c2.radial_points = 64;
        c2.angular_points = 16;
        c3.radial_points = 128;
        c3.angular_points = 32;
        double v1 = besov_seminorm(f, params, c1);
        double v2 = besov_seminorm(f, params, c2);
        double v3 = besov_seminorm(f, params, c3);
        REQUIRE(std::abs(v3 - v2) <= std::abs(v2 - v1) + 1e-12);
    }

    SECTION("dimension 3 dilation covariance") {
        auto f = make_corpus_entry("tent", 3, 16);
        auto params = BesovParams::create(0.5, 1.0, 1.0, 3);
        BesovQuadConfig cfg;
        cfg.radial_points = 48;
        cfg.angular_points = 32;
        double base = besov_seminorm(f, params, cfg);
        double got = besov_seminorm(dilate(f, 2.0), params, cfg);
        REQUIRE(got / base == Catch::Approx(std::pow(2.0, 0.5 - 3.0)).epsilon(0.03));
    }

    SECTION("second differences drive the beta > 1 path") {
        auto f = make_corpus_entry("bump", 2, 24);
        auto params = BesovParams::create(1.5, 1.0, 1.0, 2);
        REQUIRE(params.k == 2);
        double v = besov_seminorm(f, params);
        REQUIRE(v > 0.0);
        REQUIRE(std::isfinite(v));
    }

    SECTION("rejections") {
        auto f = make_corpus_entry("tent", 1, 64);
        auto params = BesovParams::create(0.3, 1.0, 1.0, 1);
        BesovQuadConfig bad;
        bad.r_min = 2.0;
        bad.r_max = 1.0;
        REQUIRE_THROWS_AS(besov_seminorm(f, params, bad), std::invalid_argument);
        auto p3 = BesovParams::create(2.5, 1.0, 1.0, 3);  // k = 3
        auto f3 = make_corpus_entry("tent", 3, 16);
        REQUIRE_THROWS_AS(besov_seminorm(f3, p3, BesovQuadConfig{}), std::invalid_argument);
        auto p2 = BesovParams::create(0.3, 1.0, 1.0, 2);
        REQUIRE_THROWS_AS(besov_seminorm(f, p2), std::invalid_argument);  // dim mismatch
    }
}
