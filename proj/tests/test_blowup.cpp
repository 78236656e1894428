#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <limits>

#include "gts/blowup.hpp"

using namespace gts;

namespace {
GrowthParams example_params() { return *example_blowup().growth; }
}  // namespace

TEST_CASE("psi values and monotonicity") {
    GrowthParams p = example_params();
    CHECK(psi(0.0, p) == Catch::Approx(1.25).margin(1e-12));
    double root = psi_root(p);
    CHECK(std::abs(psi(root, p)) <= 1e-10);
    // strictly decreasing on a grid approaching gamma/alpha
    double prev = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= 200; ++j) {
        double rho = j / 201.0 * (p.gamma / p.alpha);
        double val = psi(rho, p);
        CHECK(val < prev);
        prev = val;
    }
    // diverges to -infinity near the right end
    CHECK(psi(p.gamma / p.alpha * (1.0 - 1e-12), p) < -1e9);
    CHECK_THROWS_AS(psi(p.gamma / p.alpha, p), std::invalid_argument);
}

TEST_CASE("psi_root for the worked example") {
    GrowthParams p = example_params();
    CHECK(psi_root(p) == Catch::Approx(0.243163).margin(1e-5));

    // monotone dependence on delta: re-run the bisection on perturbed params
    GrowthParams doubled = p;
    doubled.delta *= 2.0;
    CHECK(psi_root(doubled) > psi_root(p));
}

TEST_CASE("rho_max") {
    GrowthParams p = example_params();
    CHECK(rho_max(p, 3.0, 0.24) == Catch::Approx(0.24).margin(1e-15));

    GrowthParams free = p;
    free.c_F = 0.0;
    CHECK(rho_max(free, 3.0, 0.24) ==
          Catch::Approx(std::min(0.24, p.gamma / (2.0 * p.alpha))).margin(1e-14));

    // second term vanishes as u0 approaches c_F from above
    CHECK(rho_max(p, 2.0 + 1e-9, 0.24) <= 1e-8);
    CHECK_THROWS_AS(rho_max(p, 1.5, 0.24), std::invalid_argument);
}

TEST_CASE("step_size") {
    GrowthParams p = example_params();
    StepPlan theo{0.1, StepMode::theoretical, 1.0, 0.2};
    CHECK(step_size(theo, p, 3.0) == Catch::Approx(0.16 * 0.1 * 2.35 / 3.0).margin(1e-15));

    StepPlan emp{0.25, StepMode::empirical, 1.0, 0.0};
    CHECK(step_size(emp, p, 3.0) == Catch::Approx(0.25 / 3.0).margin(1e-15));
    // k scales as norm^{1-beta}: doubling the norm halves k at beta = 2
    CHECK(step_size(emp, p, 6.0) == Catch::Approx(0.5 * step_size(emp, p, 3.0)).margin(1e-16));

    CHECK_THROWS_AS(step_size(emp, p, 0.0), std::invalid_argument);
}

TEST_CASE("continuous upper bound") {
    GrowthParams p = example_params();
    CHECK(continuous_upper_bound(p, 3.0) == Catch::Approx(2.0 / 3.0).margin(1e-15));
    CHECK(std::log(5.0 / 3.0) <= continuous_upper_bound(p, 3.0));
    GrowthParams doubled = p;
    doubled.delta *= 2.0;
    CHECK(continuous_upper_bound(doubled, 3.0) ==
          Catch::Approx(0.5 * continuous_upper_bound(p, 3.0)).margin(1e-16));
    CHECK_THROWS_AS(continuous_upper_bound(p, 1.0), std::invalid_argument);
}

TEST_CASE("discrete diagnostics") {
    GrowthParams p = example_params();
    StepPlan plan = make_plan(StepMode::theoretical, 0.05, Scheme::cg, 0.1);
    BlowupDiagnostics d = discrete_diagnostics(p, plan, 3.0);
    CHECK(d.C0 == Catch::Approx(0.16 * psi(0.1, p)).margin(1e-14));
    CHECK(d.C1 == Catch::Approx(1.5 * 1.1 / (2.5 - 0.15)).margin(1e-14));
    CHECK(d.C1 >= d.C0);
    CHECK(std::isfinite(d.discrete_upper_bound));
    CHECK(d.discrete_upper_bound > 0.0);

    // C1 >= C0 across admissible rho_0
    for (double rho0 : {0.01, 0.05, 0.1, 0.2, 0.24}) {
        StepPlan pl = make_plan(StepMode::theoretical, rho0 / 2.0, Scheme::dg, rho0);
        BlowupDiagnostics dd = discrete_diagnostics(p, pl, 3.0);
        CHECK(dd.C1 >= dd.C0);
    }
}

TEST_CASE("blowup_run empirical mode approaches ln(5/3)") {
    Problem p = example_blowup();
    SolverConfig cfg;
    StepPlan plan = make_plan(StepMode::empirical, 0.25, Scheme::cg);
    BlowupResult res = blowup_run(p, *p.growth, plan, Scheme::cg, 0, cfg);
    double exact = std::log(5.0 / 3.0);
    CHECK(std::abs(res.t_infinity_estimate - exact) < 5e-2);
    CHECK(res.stopped_by == StopReason::saturation);
    CHECK(res.steps > 10);
    REQUIRE(res.norms.size() == static_cast<size_t>(res.steps));

    // monotone improvement as rho decreases
    StepPlan finer = make_plan(StepMode::empirical, 0.125, Scheme::cg);
    BlowupResult res2 = blowup_run(p, *p.growth, finer, Scheme::cg, 0, cfg);
    CHECK(std::abs(res2.t_infinity_estimate - exact) <
          std::abs(res.t_infinity_estimate - exact));

    // estimate equals the accumulated step sizes
    double acc = 0.0;
    for (double k : res.step_sizes) acc += k;
    CHECK(res.t_infinity_estimate == Catch::Approx(acc).margin(1e-12));

    // norms nondecreasing, step sizes nonincreasing
    for (size_t m = 1; m < res.norms.size(); ++m) {
        CHECK(res.norms[m] >= res.norms[m - 1]);
        CHECK(res.step_sizes[m] <= res.step_sizes[m - 1]);
    }
}

TEST_CASE("blowup_run with infinite tau returns after the first step size") {
    Problem p = example_blowup();
    SolverConfig cfg;
    StepPlan plan = make_plan(StepMode::empirical, 0.25, Scheme::dg);
    BlowupResult res = blowup_run(p, *p.growth, plan, Scheme::dg, 0, cfg,
                                  std::numeric_limits<double>::infinity());
    CHECK(res.steps == 0);
    CHECK(res.stopped_by == StopReason::tolerance);
    CHECK(res.t_infinity_estimate == Catch::Approx(0.25 / 3.0).margin(1e-15));
}

TEST_CASE("blowup_run rejects a hypothesis violation") {
    Problem p = example_blowup();
    p.u0[0] = 1.0;  // below c_F = 2
    StepPlan plan = make_plan(StepMode::empirical, 0.25, Scheme::cg);
    CHECK_THROWS_AS(blowup_run(p, *p.growth, plan, Scheme::cg, 0, SolverConfig{}),
                    std::invalid_argument);
}

TEST_CASE("theoretical mode satisfies the growth band and time bound") {
    Problem p = example_blowup();
    GrowthParams gp = *p.growth;
    double rho0 = 0.24;
    for (Scheme scheme : {Scheme::cg, Scheme::dg}) {
        double rho = rho_max(gp, 3.0, rho0) / 2.0;
        StepPlan plan = make_plan(StepMode::theoretical, rho, scheme, rho0);
        BlowupResult res = blowup_run(p, gp, plan, scheme, 1, SolverConfig{});
        REQUIRE(res.diagnostics.has_value());
        CHECK(res.geo_violations == 0);
        CHECK(res.t_infinity_estimate <= res.diagnostics->discrete_upper_bound + 1e-12);
        // norms strictly increasing under a valid rho
        for (size_t m = 1; m < res.norms.size(); ++m) CHECK(res.norms[m] > res.norms[m - 1]);
    }
    // rho above the admissible maximum is rejected
    StepPlan bad = make_plan(StepMode::theoretical, 0.3, Scheme::cg, rho0);
    CHECK_THROWS_AS(blowup_run(p, gp, bad, Scheme::cg, 0, SolverConfig{}),
                    std::invalid_argument);
}
