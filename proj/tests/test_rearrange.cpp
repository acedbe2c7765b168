#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fraclab/corpus.hpp"
#include "fraclab/rearrange.hpp"

using namespace fraclab;

namespace {

GridFunction ball_indicator(int dim, const Vec& center, double radius, int resolution) {
    GridFunction f;
    f.dim = dim;
    f.spacing = 1.0 / resolution;
    int m = int(std::ceil((norm(center, dim) + radius) * resolution)) + 2;
    int side = 2 * m + 1;
    f.shape = {side, dim > 1 ? side : 1, dim > 2 ? side : 1};
    for (int a = 0; a < dim; ++a) f.origin[a] = -m * f.spacing;
    f.values.assign(f.cell_count(), 0.0);
    for (int k = 0; k < f.shape[2]; ++k)
        for (int j = 0; j < f.shape[1]; ++j)
            for (int i = 0; i < f.shape[0]; ++i)
                if (norm(sub(f.cell_center(i, j, k), center), dim) <= radius) f.at(i, j, k) = 1.0;
    return f;
}

GridFunction zero_grid(int dim) {
    GridFunction z;
    z.dim = dim;
    z.spacing = 0.25;
    z.shape = {9, dim > 1 ? 9 : 1, dim > 2 ? 9 : 1};
    z.values.assign(z.cell_count(), 0.0);
    return z;
}

}  // namespace

TEST_CASE("rearrange") {
    SECTION("ball indicator maps to the origin ball of equal volume") {
        for (double center : {0.0, 0.3}) {
            auto f = ball_indicator(1, vec1(center), 0.4, 64);
            auto prof = rearrange(f);
            REQUIRE(std::abs(prof.support_radius() - 0.4) <= f.spacing);
            REQUIRE(prof.max_value() == 1.0);
            // volume of the profile ball matches the digitized volume exactly
            double vol = double(f.support_cell_count()) * f.cell_volume();
            REQUIRE(prof.superlevel_volume(0.5) == Catch::Approx(vol));
        }
    }

    SECTION("two disjoint balls collapse to one ball of the summed volume") {
        auto f = ball_indicator(1, vec1(-0.5), 0.2, 64);
        auto g = ball_indicator(1, vec1(0.7), 0.3, 64);
        auto [fa, ga] = align_on_common_grid(f, g);
        for (std::size_t i = 0; i < fa.values.size(); ++i)
            fa.values[i] = std::max(fa.values[i], ga.values[i]);
        double vol = double(fa.support_cell_count()) * fa.cell_volume();
        auto prof = rearrange(fa);
        REQUIRE(prof.superlevel_volume(0.5) == Catch::Approx(vol));
        REQUIRE(std::abs(prof.support_radius() - vol / 2.0) <= fa.spacing);
    }

    SECTION("a radial nonincreasing function is its own radial trace") {
        auto f = make_corpus_entry("tent", 1, 64);
        auto prof = rearrange(f);
        for (int i = 0; i < f.shape[0]; ++i) {
            double r = std::abs(f.origin[0] + i * f.spacing);
            if (r < 1.0 - 2.0 * f.spacing)
                REQUIRE(std::abs(prof.value_at(r) - f.at(i)) <= f.spacing);
        }
    }

    SECTION("profile invariants hold on the whole corpus") {
        for (const auto& name : corpus_catalog())
            REQUIRE_NOTHROW(rearrange(make_corpus_entry(name, 1, 64)).validate());
    }
}

TEST_CASE("equimeasurability") {
    SECTION("every corpus entry agrees with its rearrangement within one cell") {
        for (int dim : {1, 2, 3})
            for (const auto& name : corpus_catalog()) {
                auto f = make_corpus_entry(name, dim, dim == 1 ? 64 : dim == 2 ? 32 : 16);
                auto rep = equimeasurable(f, rearrange(f));
                CAPTURE(name, dim, rep.max_deviation);
                REQUIRE(rep.equal);
                REQUIRE(rep.max_deviation <= f.cell_volume() * (1.0 + 1e-9));
            }
    }

    SECTION("zero function against the zero profile") {
        auto z = zero_grid(1);
        auto rep = equimeasurable(z, rearrange(z));
        REQUIRE(rep.equal);
        REQUIRE(rep.max_deviation == 0.0);
    }

    SECTION("a dilated profile is detected as not equimeasurable") {
        auto f = make_corpus_entry("bump", 1, 64);
        auto rep = equimeasurable(f, rearrange(dilate(f, 2.0)));
        REQUIRE_FALSE(rep.equal);
    }

    SECTION("dimension mismatch is an error") {
        auto f = make_corpus_entry("bump", 1, 64);
        auto p2 = rearrange(make_corpus_entry("bump", 2, 32));
        REQUIRE_THROWS_AS(equimeasurable(f, p2), std::invalid_argument);
    }
}

TEST_CASE("weighted integrals") {
    SECTION("closed-form oracle for the unit interval") {
        auto f = ball_indicator(1, vec1(0.0), 1.0, 64);
        REQUIRE(weighted_integral(f, 1.0, 0.5) == Catch::Approx(4.0).epsilon(0.02));
    }

    SECTION("zero input") {
        REQUIRE(weighted_integral(zero_grid(1), 1.0, 0.5) == 0.0);
        RadialProfile zp = rearrange(zero_grid(1));
        REQUIRE(weighted_integral(zp, 1.0, 0.5) == 0.0);
    }

    SECTION("gamma >= n is rejected") {
        auto f = make_corpus_entry("bump", 1, 64);
        REQUIRE_THROWS_AS(weighted_integral(f, 1.0, 1.0), std::invalid_argument);
    }

    SECTION("rearrangement identity with the derived constant") {
        // int |f#| |x|^{-p beta} dx = C * ||f||_{L^{np/(n-p beta), p}} with
        // C = [sigma_{n-1} V_n^{-(n-p beta)/n} / (n - p beta)]^{1/p}.
        const double beta = 0.3, p = 1.0;
        const int n = 1;
        auto f = make_corpus_entry("bump", n, 64);
        double lhs = weighted_integral(rearrange(f), p, p * beta);
        double c = std::pow(unit_sphere_area(n) *
                                std::pow(unit_ball_volume(n), -(n - p * beta) / n) /
                                (n - p * beta),
                            1.0 / p);
        auto part = LevelPartition::grid_values(f);
        double rhs =
            c * lorentz_norm(f, LorentzParams::create(n * p / (n - p * beta), p),
                             Content::lebesgue(), part);
        CAPTURE(lhs, rhs, c);
        REQUIRE(lhs == Catch::Approx(rhs).epsilon(0.03));
    }

    SECTION("rearrangement increases the pairing with the radial weight") {
        for (const auto& name : corpus_catalog()) {
            auto f = make_corpus_entry(name, 1, 64);
            for (double p : {1.0, 2.0}) {
                double direct = weighted_integral(f, p, p * 0.3);
                double symmetric = weighted_integral(rearrange(f).pow(1.0), p, p * 0.3);
                CAPTURE(name, p);
                REQUIRE(direct <= symmetric * (1.0 + 1e-9));
            }
        }
    }
}

TEST_CASE("riesz pairing") {
    SECTION("already rearranged pair: both pairings equal vol(B1)") {
        auto f = ball_indicator(1, vec1(0.0), 1.0, 64);
        auto [direct, rearranged] = riesz_pairing(f, f);
        double vol = double(f.support_cell_count()) * f.cell_volume();
        REQUIRE(direct == Catch::Approx(vol).epsilon(1e-12));
        REQUIRE(rearranged == Catch::Approx(vol).epsilon(1e-9));
    }

    SECTION("two_bump against a shifted plateau") {
        auto f = make_corpus_entry("two_bump", 1, 64);
        auto g = translate_cells(make_corpus_entry("plateau", 1, 64), {20, 0, 0});
        auto [direct, rearranged] = riesz_pairing(f, g);
        REQUIRE(direct <= rearranged * (1.0 + 1e-9));
        REQUIRE(rearranged > direct);  // genuinely shifted apart
    }

    SECTION("pairing with zero") {
        auto f = make_corpus_entry("bump", 1, 64);
        auto z = zero_grid(1);
        z.spacing = f.spacing;  // align lattices
        z.origin = f.origin;
        auto [direct, rearranged] = riesz_pairing(f, z);
        REQUIRE(direct == 0.0);
        REQUIRE(rearranged == 0.0);
    }

    SECTION("inequality across corpus pairs, equality on radial pairs") {
        auto names = corpus_catalog();
        int pairs = 0;
        for (std::size_t a = 0; a < names.size(); ++a)
            for (std::size_t b = a; b < names.size(); ++b) {
                auto f = make_corpus_entry(names[a], 1, 64);
                auto g = make_corpus_entry(names[b], 1, 64);
                auto [direct, rearranged] = riesz_pairing(f, g);
                CAPTURE(names[a], names[b]);
                REQUIRE(direct <= rearranged + 1e-9);
                ++pairs;
                bool radial_pair = names[a] != "two_bump" && names[b] != "two_bump";
                if (radial_pair)
                    REQUIRE(std::abs(direct - rearranged) <= 1e-9 * std::max(1.0, rearranged));
            }
        REQUIRE(pairs >= 10);
    }

    SECTION("grid mismatch is an error") {
        auto f = make_corpus_entry("bump", 1, 64);
        auto g = make_corpus_entry("bump", 1, 32);
        REQUIRE_THROWS_AS(riesz_pairing(f, g), std::invalid_argument);
    }
}

TEST_CASE("profile transformations") {
    SECTION("order preservation under pointwise domination") {
        auto f = make_corpus_entry("two_bump", 1, 64);
        GridFunction g = f;
        for (double& v : g.values) v *= 2.0;
        auto pf = rearrange(f);
        auto pg = rearrange(g);
        for (double r : {0.05, 0.2, 0.4, 0.6, 0.9})
            REQUIRE(pf.value_at(r) <= pg.value_at(r) + 1e-12);
    }

    SECTION("composition with a power commutes with rearrangement") {
        auto f = make_corpus_entry("two_bump", 1, 64);
        GridFunction g = f;
        for (double& v : g.values) v = v * v;
        auto direct = rearrange(g);          // (|f|^2)#
        auto composed = rearrange(f).pow(2.0);  // (f#)^2
        for (double r = 0.01; r < 1.2; r += 0.03)
            REQUIRE(std::abs(direct.value_at(r) - composed.value_at(r)) <=
                    f.spacing + 1e-12);
    }
}
