#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "gts/blowup.hpp"
#include "gts/problems.hpp"

using namespace gts;

TEST_CASE("example_blowup definition") {
    Problem p = example_blowup();
    CHECK(p.dim == 1);
    CHECK(p.exact(0.0)[0] == Catch::Approx(3.0).margin(1e-13));
    CHECK(p.rhs(0.0, scalar(3.0))[0] == Catch::Approx(6.0).margin(1e-13));
    CHECK(p.exact(0.5)[0] ==
          Catch::Approx(3.0 * (std::exp(0.5) + 1.0) / (5.0 - 3.0 * std::exp(0.5))).margin(1e-10));
    CHECK(*p.t_blowup_exact == Catch::Approx(std::log(5.0 / 3.0)).margin(1e-15));
    // solution grows without bound approaching the blow-up time
    CHECK(p.exact(*p.t_blowup_exact - 1e-8)[0] > 1e7);
    REQUIRE(p.growth.has_value());
    CHECK(p.growth->alpha == 1.5);
    CHECK(p.growth->beta == 2.0);
    CHECK(p.growth->delta == 0.5);
    CHECK(p.growth->c_F == 2.0);
    CHECK(p.growth->gamma == 2.5);
    CHECK(p.growth->L_cF == 5.0);
}

TEST_CASE("example_blowup satisfies the growth inequalities by sampling") {
    Problem p = example_blowup();
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> logu(std::log(2.0), std::log(1e3));
    std::uniform_real_distribution<double> tdist(0.0, 1.0);
    for (int s = 0; s < 10000; ++s) {
        double u = std::exp(logu(rng)) * (s % 2 ? 1.0 : -1.0);
        double t = tdist(rng);
        double f = p.rhs(t, scalar(u))[0];
        CHECK(std::abs(f) <= 1.5 * u * u);
        CHECK(f * u >= 0.5 * std::pow(std::abs(u), 3.0));
    }
}

TEST_CASE("example_blowup Lipschitz constant gamma by sampling pairs") {
    Problem p = example_blowup();
    std::mt19937 rng(103);
    std::uniform_real_distribution<double> udist(2.0, 50.0);
    std::uniform_real_distribution<double> tdist(0.0, 1.0);
    for (int s = 0; s < 5000; ++s) {
        double u = udist(rng), v = udist(rng), t = tdist(rng);
        double lhs = std::abs(p.rhs(t, scalar(u))[0] - p.rhs(t, scalar(v))[0]);
        CHECK(lhs <= 2.5 * std::max(u, v) * std::abs(u - v) * (1.0 + 1e-12));
    }
}

TEST_CASE("clip_radial") {
    auto f = [](double, const Vec& x) { return Vec(x.norm() * x); };
    RhsFn g = clip_radial(f, 2.0);

    Vec inside(2);
    inside << 0.5, -0.7;
    CHECK((g(0.0, inside) - f(0.0, inside)).norm() == 0.0);  // bitwise inside the ball

    Vec outside(2);
    outside << 4.0, 0.0;  // norm 2M
    CHECK((g(0.0, outside) - f(0.0, Vec(outside / 2.0))).norm() <= 1e-15);

    CHECK_THROWS_AS(clip_radial(f, 0.0), std::invalid_argument);
}

TEST_CASE("clip_radial is globally Lipschitz for f(x) = ||x|| x") {
    // On the ball of radius M the gradient of ||x|| x is bounded by 2M; the
    // sampled check uses the slightly larger 3M for slack-free assertions.
    std::mt19937 rng(107);
    for (double M : {1.0, 10.0}) {
        auto f = [](double, const Vec& x) { return Vec(x.norm() * x); };
        RhsFn g = clip_radial(f, M);
        std::uniform_real_distribution<double> dist(-3.0 * M, 3.0 * M);
        int violations = 0;
        for (int s = 0; s < 10000; ++s) {
            Vec x(3), y(3);
            for (int d = 0; d < 3; ++d) {
                x[d] = dist(rng);
                y[d] = dist(rng);
            }
            if ((g(0.0, x) - g(0.0, y)).norm() > 3.0 * M * (x - y).norm()) ++violations;
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("linear_test") {
    Problem p = linear_test(-1.0, scalar(2.0));
    CHECK(p.exact(1.0)[0] == Catch::Approx(2.0 * std::exp(-1.0)).margin(1e-14));
    CHECK(p.rhs(0.0, scalar(3.0))[0] == -3.0);
    CHECK_FALSE(p.t_blowup_exact.has_value());
}

TEST_CASE("power_law") {
    Problem p = power_law(1.0, 2.0, 1.0);
    CHECK(*p.t_blowup_exact == Catch::Approx(1.0).margin(1e-15));
    // u(t) = 1/(1-t)
    CHECK(p.exact(0.5)[0] == Catch::Approx(2.0).margin(1e-13));
    CHECK(p.exact(0.0)[0] == Catch::Approx(1.0).margin(1e-15));

    // the continuous upper bound is sharp for u' = alpha u^beta (delta = alpha)
    CHECK(*p.t_blowup_exact ==
          Catch::Approx(continuous_upper_bound(*p.growth, 1.0)).margin(1e-14));

    CHECK_THROWS_AS(power_law(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(power_law(0.0, 2.0), std::invalid_argument);
}

TEST_CASE("problem registry") {
    CHECK(make_problem("example54", {}).name == "example54");
    CHECK(make_problem("linear", {{"lambda", 2.0}}).rhs(0.0, scalar(1.0))[0] == 2.0);
    CHECK(*make_problem("powerlaw", {{"alpha", 2.0}, {"beta", 2.0}, {"u0", 1.0}}).t_blowup_exact ==
          Catch::Approx(0.5).margin(1e-15));
    CHECK_THROWS_AS(make_problem("nope", {}), std::invalid_argument);
}
