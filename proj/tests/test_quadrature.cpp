#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "powerd/quadrature.hpp"

using namespace powerd;
using powerd::testutil::V;

namespace {

double factorial(int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// all monomial exponent vectors with |alpha| <= degree
void monomials(int d, int degree, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == d) {
        out.push_back(cur);
        return;
    }
    for (int e = 0; e <= degree; ++e) {
        cur.push_back(e);
        monomials(d, degree - e, cur, out);
        cur.pop_back();
    }
}

// integral of prod x_i^alpha_i over the reference d-simplex
double simplex_monomial_integral(const std::vector<int>& alpha) {
    int d = static_cast<int>(alpha.size());
    int total = 0;
    double num = 1;
    for (int a : alpha) {
        total += a;
        num *= factorial(a);
    }
    return num / factorial(d + total);
}

}  // namespace

TEST_CASE("rules are barycentric and normalized") {
    for (int d = 1; d <= 6; ++d)
        for (int q = 1; q <= 4; ++q) {
            CAPTURE(d);
            CAPTURE(q);
            const QuadratureRule& r = quadrature_rule(d, q);
            CHECK(r.dim == d);
            CHECK(r.order == q);
            REQUIRE(r.npts == static_cast<int>(r.weights.size()));
            REQUIRE(static_cast<int>(r.nodes.size()) == r.npts * (d + 1));
            double wsum = 0;
            for (double w : r.weights) wsum += w;
            CHECK(wsum == doctest::Approx(1.0).epsilon(1e-13));
            for (int p = 0; p < r.npts; ++p) {
                double lsum = 0;
                for (int i = 0; i <= d; ++i) lsum += r.nodes[p * (d + 1) + i];
                CHECK(lsum == doctest::Approx(1.0).epsilon(1e-13));
            }
        }
}

TEST_CASE("rule sizes follow the construction") {
    for (int d = 1; d <= 6; ++d) {
        CHECK(quadrature_rule(d, 1).npts == 1);
        CHECK(quadrature_rule(d, 2).npts == d + 1);
        CHECK(quadrature_rule(d, 3).npts == d + 2);
        CHECK(quadrature_rule(d, 4).npts == (d + 1) * (d + 2) / 2 + d + 2);
    }
}

TEST_CASE("unsupported rule requests throw") {
    CHECK_THROWS_AS(quadrature_rule(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(quadrature_rule(7, 2), std::invalid_argument);
    CHECK_THROWS_AS(quadrature_rule(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(quadrature_rule(3, 5), std::invalid_argument);
}

TEST_CASE("every monomial up to the rule degree integrates exactly") {
    for (int d = 1; d <= 6; ++d) {
        for (int q = 1; q <= 4; ++q) {
            const QuadratureRule& r = quadrature_rule(d, q);
            int degree = (q == 4) ? 5 : q;  // the q=4 rule is degree-5 exact
            std::vector<std::vector<int>> alphas;
            std::vector<int> cur;
            monomials(d, degree, cur, alphas);
            for (const auto& alpha : alphas) {
                double est = 0;
                for (int p = 0; p < r.npts; ++p) {
                    double f = 1;
                    // x_i equals the barycentric coordinate of vertex e_i
                    for (int i = 0; i < d; ++i)
                        f *= std::pow(r.nodes[p * (d + 1) + i + 1], alpha[i]);
                    est += r.weights[p] * f;
                }
                est /= factorial(d);  // reference simplex volume
                double truth = simplex_monomial_integral(alpha);
                CAPTURE(d);
                CAPTURE(q);
                REQUIRE(std::abs(est - truth) <= 1e-13 * std::abs(truth));
            }
        }
    }
}

TEST_CASE("simplex volumes: determinant and Gram paths") {
    Simplex tri;
    tri.np = 3;
    tri.v[0] = V({0, 0});
    tri.v[1] = V({1, 0});
    tri.v[2] = V({0, 1});
    CHECK(simplex_volume(tri) == doctest::Approx(0.5).epsilon(1e-14));

    Simplex tri3;  // same triangle in a larger ambient space
    tri3.np = 3;
    tri3.v[0] = V({0, 0, 4});
    tri3.v[1] = V({1, 0, 4});
    tri3.v[2] = V({0, 1, 4});
    CHECK(simplex_volume(tri3) == doctest::Approx(0.5).epsilon(1e-12));

    Simplex seg;
    seg.np = 2;
    seg.v[0] = V({0, 0, 0});
    seg.v[1] = V({1, 2, 2});
    CHECK(simplex_volume(seg) == doctest::Approx(3.0).epsilon(1e-12));

    Simplex degenerate;
    degenerate.np = 3;
    degenerate.v[0] = V({0, 0});
    degenerate.v[1] = V({1, 1});
    degenerate.v[2] = V({2, 2});
    CHECK(simplex_volume(degenerate) == doctest::Approx(0.0));
}

TEST_CASE("cube fan decomposition counts and volume") {
    long long expect[7] = {0, 0, 4, 24, 192, 1920, 23040};  // d! * 2^(d-1)
    for (int d = 2; d <= 6; ++d) {
        CAPTURE(d);
        bool degenerate = true;
        SimplexBatch b = decompose(unit_cube(d, d + 1), &degenerate);
        CHECK(!degenerate);
        CHECK(b.dim == d);
        CHECK(b.spatial == d);  // lifted coordinate stripped
        CHECK(static_cast<long long>(b.simplices.size()) == expect[d]);
        for (const auto& s : b.simplices) CHECK(s.v[0].n == d);
        CHECK(batch_volume(b) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("decomposition flags affinely dependent polytopes") {
    ConvexPolytope P = unit_cube(2, 3);
    // clipping to the facet x >= 1 collapses the square to a segment
    HalfSpace h = make_halfspace(V({1.0, 0.5, 0}), V({1, 0, 0}), 9);
    REQUIRE(clip(P, h));
    REQUIRE(P.verts.size() == 2);
    bool degenerate = false;
    SimplexBatch b = decompose(P, &degenerate);
    CHECK(degenerate);
    CHECK(b.simplices.empty());
}

TEST_CASE("moments of a linear density on the unit square") {
    SimplexBatch square = decompose(unit_cube(2, 3));
    DensityField rho = DensityField::custom(2, [](const Vec& x) { return x[0]; });
    Moments m = integrate_moments(square, rho, 3);
    CHECK(m.mass == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(m.m1[0] / m.mass == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(m.m1[1] / m.mass == doctest::Approx(0.5).epsilon(1e-13));
    // s2 = int x0 (x0^2 + x1^2) = 1/4 + 1/6
    CHECK(m.s2 == doctest::Approx(0.25 + 1.0 / 6.0).epsilon(1e-13));
}

TEST_CASE("quadratic densities integrate exactly at order 2") {
    for (int d = 2; d <= 4; ++d) {
        CAPTURE(d);
        SimplexBatch cube = decompose(unit_cube(d, d + 1));
        DensityField rho = DensityField::make(DensityKind::Sphere, d);
        Moments m = integrate_moments(cube, rho, 2);
        double truth = 1.0 + 100.0 * d / 12.0;
        CHECK(m.mass == doctest::Approx(truth).epsilon(1e-12));
        // symmetry puts the weighted centroid at the cube center
        for (int c = 0; c < d; ++c)
            CHECK(m.m1[c] / m.mass == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("energy term of a centered site on the unit square") {
    SimplexBatch square = decompose(unit_cube(2, 3));
    DensityField rho = DensityField::make(DensityKind::Uniform, 2);
    double e = integrate_energy_term(square, rho, V({0.5, 0.5}), 0.0, 2);
    CHECK(e == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    // a weight shifts the term by -w * mass
    double ew = integrate_energy_term(square, rho, V({0.5, 0.5}), 0.3, 2);
    CHECK(ew == doctest::Approx(1.0 / 6.0 - 0.3).epsilon(1e-13));
}

TEST_CASE("refined grid integrates the sharp Gaussian to reference accuracy") {
    const int d = 4, k = 3;
    SimplexBatch cell = decompose(unit_cube(d, d + 1));
    SimplexBatch refined;
    refined.dim = d;
    refined.spatial = d;
    int idx[4];
    for (idx[0] = 0; idx[0] < k; ++idx[0])
        for (idx[1] = 0; idx[1] < k; ++idx[1])
            for (idx[2] = 0; idx[2] < k; ++idx[2])
                for (idx[3] = 0; idx[3] < k; ++idx[3])
                    for (Simplex s : cell.simplices) {
                        for (int p = 0; p < s.np; ++p)
                            for (int c = 0; c < d; ++c) s.v[p][c] = (idx[c] + s.v[p][c]) / k;
                        refined.simplices.push_back(s);
                    }
    CHECK(batch_volume(refined) == doctest::Approx(1.0).epsilon(1e-10));

    DensityField rho = DensityField::make(DensityKind::Gaussian, d);
    Moments m = integrate_moments(refined, rho, 4);
    double truth = std::pow(std::erf(2.5), d);  // product of per-axis masses
    CHECK(std::abs(m.mass - truth) < 1e-4);
}
