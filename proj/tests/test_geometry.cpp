#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "eulergeom/geometry.hpp"

using namespace eulergeom;

TEST_CASE("area evaluation") {
    const Geometry sph = Geometry::spherical(2.0);
    CHECK(sph.area(3.0) == Catch::Approx(9.0));
    CHECK_THROWS_AS(sph.area(0.0), DomainError);
    CHECK_THROWS_AS(sph.area(-1.0), DomainError);

    const Geometry sph10 = Geometry::spherical(2.0, 10);
    CHECK(sph10.area(0.0) == Catch::Approx(0.01).epsilon(1e-14));

    const Geometry noz = Geometry::nozzle_constant(1.0);
    CHECK(noz.area(123.0) == 1.0);
}

TEST_CASE("negative gradient norms") {
    const Geometry sph = Geometry::spherical(2.0, 5);
    const auto n1 = sph.grad_negative_part_norms(0.0, 10.0);
    CHECK(n1.first == 0.0);
    CHECK(n1.second == 0.0);

    // A = 2 + cos x on [0, 2 pi]: (A')_- = sin x on (0, pi), L1 = 2, Linf = 1
    const Geometry noz = Geometry::nozzle_cosine(2.0, 1.0, 1.0);
    const auto n2 = noz.grad_negative_part_norms(0.0, 2.0 * kPi);
    CHECK(n2.first == Catch::Approx(2.0).epsilon(1e-6));
    CHECK(n2.second == Catch::Approx(1.0).epsilon(1e-6));

    const auto n3 = Geometry::nozzle_constant(1.0).grad_negative_part_norms(-5.0, 5.0);
    CHECK(n3.first == 0.0);
    CHECK(n3.second == 0.0);
}

TEST_CASE("regularization error") {
    const Geometry a1 = Geometry::spherical(1.0, 10);
    CHECK(a1.regularization_error(0.0, 1.0) == Catch::Approx(0.1).epsilon(1e-12));

    const Geometry a2 = Geometry::spherical(2.0, 10);
    CHECK(a2.regularization_error(0.0, 1.0) == Catch::Approx(0.21).epsilon(1e-6));

    CHECK(Geometry::nozzle_constant(2.0).regularization_error(0.0, 1.0) == 0.0);
    CHECK_THROWS_AS(Geometry::spherical(2.0).regularization_error(0.0, 1.0), NotApplicable);
}

TEST_CASE("regularization is monotone from above and uniformly convergent") {
    const double alpha = 1.7;
    double prev_err = 1e300;
    for (int n : {2, 4, 8, 16, 32}) {
        const Geometry g = Geometry::spherical(alpha, n);
        // A <= A^n pointwise
        for (int k = 0; k <= 200; ++k) {
            const double x = 5.0 * k / 200.0 + 1e-9;
            CHECK(std::pow(x, alpha) <= g.area(x) + 1e-14);
        }
        const double err = g.regularization_error(0.0, 5.0);
        CHECK(err < prev_err);
        prev_err = err;
    }
}

TEST_CASE("table profiles interpolate C1 and keep bounds") {
    std::vector<double> xs, as;
    for (int k = 0; k <= 24; ++k) {
        const double x = -3.0 + 6.0 * k / 24.0;
        xs.push_back(x);
        as.push_back(2.0 + std::sin(x));
    }
    const Geometry g = Geometry::nozzle_table(xs, as);
    CHECK(g.area(0.5) == Catch::Approx(2.0 + std::sin(0.5)).margin(2e-3));
    // derivative continuity across a knot
    const double x0 = xs[7];
    const double dl = g.area_deriv(x0 - 1e-7);
    const double dr = g.area_deriv(x0 + 1e-7);
    CHECK(dl == Catch::Approx(dr).margin(1e-4));
    CHECK(g.area_lower_bound() > 0.0);
    CHECK_THROWS_AS(Geometry::nozzle_table({0.0, 1.0, 2.0, 3.0}, {1.0, -1.0, 1.0, 1.0}),
                    DomainError);
}
