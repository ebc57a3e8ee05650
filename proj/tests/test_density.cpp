#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "helpers.hpp"
#include "powerd/density.hpp"
#include "powerd/sites.hpp"

using namespace powerd;
using powerd::testutil::V;

TEST_CASE("uniform field is one everywhere") {
    DensityField rho = DensityField::by_name("uniform", 3);
    CHECK(rho.eval(V({0.1, 0.9, 0.4})) == 1.0);
    CHECK(rho.recommended_order == 2);
}

TEST_CASE("gaussian field peaks at its center with the normal constant") {
    DensityField rho = DensityField::by_name("gaussian", 4);
    CHECK(rho.recommended_order == 4);
    double peak = rho.eval(V({0.5, 0.5, 0.5, 0.5}));
    CHECK(peak == doctest::Approx(63.3257).epsilon(1e-4));
    CHECK(peak ==
          doctest::Approx(1.0 / std::sqrt(std::pow(2 * std::numbers::pi, 4) *
                                          std::pow(0.02, 4))).epsilon(1e-12));

    // reflection symmetry through the center along every axis
    for (int k = 0; k < 4; ++k) {
        Vec lo = V({0.5, 0.5, 0.5, 0.5});
        Vec hi = lo;
        lo[k] -= 0.17;
        hi[k] += 0.17;
        CHECK(rho.eval(lo) == doctest::Approx(rho.eval(hi)).epsilon(1e-14));
    }

    // one-axis displacement matches the 1d normal profile
    double off = rho.eval(V({0.5 + 0.1, 0.5, 0.5, 0.5}));
    CHECK(off == doctest::Approx(peak * std::exp(-0.5 * 0.01 / 0.02)).epsilon(1e-13));
}

TEST_CASE("sphere field grows quadratically from the center") {
    DensityField rho = DensityField::by_name("sphere", 2);
    CHECK(rho.eval(V({0.5, 0.5})) == doctest::Approx(1.0));
    CHECK(rho.eval(V({0.0, 0.0})) == doctest::Approx(1.0 + 100.0 * 0.5).epsilon(1e-14));
    CHECK(rho.eval(V({0.5, 0.9})) == doctest::Approx(1.0 + 100.0 * 0.16).epsilon(1e-13));
    CHECK(rho.recommended_order == 2);
}

TEST_CASE("cone field hits its cap exactly on the segment") {
    DensityField rho = DensityField::by_name("cone", 2);
    CHECK(rho.recommended_order == 2);
    // (r,t) = (0.4,0) and (0.7,1) lie on the segment: h = 0
    CHECK(rho.eval(V({0.4, 0.0})) == doctest::Approx(100000.0).epsilon(1e-12));
    CHECK(rho.eval(V({0.7, 1.0})) == doctest::Approx(100000.0).epsilon(1e-12));
    // midpoint of the segment
    CHECK(rho.eval(V({0.55, 0.5})) == doctest::Approx(100000.0).epsilon(1e-12));
}

TEST_CASE("cone distance clamps at both segment endpoints") {
    DensityField rho = DensityField::by_name("cone", 2);
    // beyond the t=1 end: closest point is (0.7, 1), h^2 = 0.8^2 + 1 = 1.64
    CHECK(rho.eval(V({1.5, 2.0})) == doctest::Approx(100.0 / 1.641).epsilon(1e-13));
    // before the t=0 end: closest point is (0.4, 0), h^2 = 0.4^2 + 1 = 1.16
    CHECK(rho.eval(V({0.0, -1.0})) == doctest::Approx(100.0 / 1.161).epsilon(1e-13));
}

TEST_CASE("cone field is radially symmetric about the corner axis") {
    DensityField rho = DensityField::by_name("cone", 4);
    double r = 0.55, t = 0.35;
    double ref = rho.eval(V({r, 0.0, 0.0, t}));
    for (double angle : {0.3, 0.9, 1.4}) {
        Vec x = V({r * std::cos(angle), r * std::sin(angle), 0.0, t});
        CHECK(rho.eval(x) == doctest::Approx(ref).epsilon(1e-12));
    }
    // the same (r,t) reached through the third coordinate
    CHECK(rho.eval(V({0.0, 0.0, r, t})) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("all fields stay strictly positive across the cube") {
    std::mt19937_64 rng(99);
    for (int d : {2, 4, 6}) {
        DensityField fields[] = {
            DensityField::by_name("uniform", d), DensityField::by_name("gaussian", d),
            DensityField::by_name("cone", d), DensityField::by_name("sphere", d)};
        for (int s = 0; s < 250000; ++s) {
            Vec x = powerd::testutil::random_point(d, rng);
            for (const auto& f : fields) {
                double v = f.eval(x);
                REQUIRE(v > 0.0);
                REQUIRE(std::isfinite(v));
            }
        }
    }
}

TEST_CASE("name lookup round-trips and rejects unknown names") {
    for (const char* n : {"uniform", "gaussian", "cone", "sphere"})
        CHECK(DensityField::by_name(n, 3).name() == n);
    CHECK_THROWS_AS(DensityField::by_name("triangle", 3), std::invalid_argument);
}

TEST_CASE("custom fields evaluate the supplied function") {
    DensityField rho = DensityField::custom(2, [](const Vec& x) { return 2.0 + x[1]; }, 3);
    CHECK(rho.eval(V({0.4, 0.25})) == doctest::Approx(2.25));
    CHECK(rho.recommended_order == 3);
    CHECK(rho.name() == "custom");
}
