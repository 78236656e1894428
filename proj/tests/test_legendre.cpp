#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "gts/legendre.hpp"

using namespace gts;

TEST_CASE("legendre_eval basic values") {
    CHECK(legendre_eval(0, 0.37) == 1.0);
    CHECK(legendre_eval(1, -1.0) == -1.0);
    // K_2 = (3x^2 - 1)/2 from the three-term recurrence
    CHECK(legendre_eval(2, 0.0) == Catch::Approx(-0.5).margin(1e-15));
}

TEST_CASE("legendre_eval endpoint normalization and boundedness") {
    for (int i = 0; i <= 20; ++i) {
        CHECK(legendre_eval(i, -1.0) == (i % 2 ? -1.0 : 1.0));
        CHECK(legendre_eval(i, 1.0) == 1.0);
        for (int j = 0; j <= 100; ++j) {
            double x = -1.0 + 2.0 * j / 100.0;
            CHECK(std::abs(legendre_eval(i, x)) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("legendre orthogonality") {
    for (int i = 0; i <= 12; ++i) {
        for (int j = 0; j <= 12; ++j) {
            const QuadRule& quad = gauss_rule(i + j + 1);
            double acc = 0.0;
            for (int q = 0; q < quad.size(); ++q)
                acc += quad.weights[q] * legendre_eval(i, quad.nodes[q]) *
                       legendre_eval(j, quad.nodes[q]);
            double expected = i == j ? 2.0 / (2.0 * i + 1.0) : 0.0;
            CHECK(acc == Catch::Approx(expected).margin(1e-12));
        }
    }
}

TEST_CASE("gauss_rule small rules") {
    const QuadRule& r1 = gauss_rule(1);
    REQUIRE(r1.size() == 1);
    CHECK(r1.nodes[0] == 0.0);
    CHECK(r1.weights[0] == Catch::Approx(2.0).margin(1e-15));

    const QuadRule& r2 = gauss_rule(2);
    REQUIRE(r2.size() == 2);
    CHECK(r2.nodes[0] == Catch::Approx(-0.5773502691896257).margin(1e-14));
    CHECK(r2.nodes[1] == Catch::Approx(0.5773502691896257).margin(1e-14));
    CHECK(r2.weights[0] == Catch::Approx(1.0).margin(1e-14));
    CHECK(r2.weights[1] == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("gauss_rule invariants") {
    for (int n : {1, 2, 3, 5, 8, 13, 21, 40, 64}) {
        const QuadRule& quad = gauss_rule(n);
        double wsum = 0.0;
        for (int q = 0; q < quad.size(); ++q) {
            wsum += quad.weights[q];
            CHECK(quad.weights[q] > 0.0);
            if (q > 0) CHECK(quad.nodes[q] > quad.nodes[q - 1]);
            // symmetry about 0
            CHECK(quad.nodes[q] == Catch::Approx(-quad.nodes[n - 1 - q]).margin(1e-13));
        }
        CHECK(wsum == Catch::Approx(2.0).margin(1e-13));
        // exactness on monomials up to degree 2n-1
        for (int j = 0; j <= 2 * n - 1; ++j) {
            double acc = 0.0;
            for (int q = 0; q < quad.size(); ++q)
                acc += quad.weights[q] * std::pow(quad.nodes[q], j);
            double exact = j % 2 ? 0.0 : 2.0 / (j + 1.0);
            CHECK(acc == Catch::Approx(exact).margin(1e-12 * (1.0 + std::abs(exact))));
        }
    }
}

TEST_CASE("interval map") {
    IntervalMap a(0.0, 0.1);
    CHECK(a.to_time(-1.0) == 0.0);
    CHECK(a.to_time(1.0) == Catch::Approx(0.1).margin(0));

    IntervalMap b(1.0, 2.0);
    CHECK(b.to_time(0.0) == Catch::Approx(2.0).margin(1e-15));
    CHECK(b.to_reference(3.0) == 1.0);
    CHECK(b.to_reference(1.0) == -1.0);

    // mutually inverse
    for (double x : {-1.0, -0.3, 0.0, 0.7, 1.0})
        CHECK(b.to_reference(b.to_time(x)) == Catch::Approx(x).margin(1e-14));

    CHECK_THROWS_AS(b.to_reference(3.5), std::invalid_argument);
    CHECK_THROWS_AS(IntervalMap(0.0, 0.0), std::invalid_argument);
}
