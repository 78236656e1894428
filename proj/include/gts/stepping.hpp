#pragma once

// One-step cG and dG solvers as Picard fixed-point iterations on the local
// integral forms, plus the multi-step mesh driver and the subspace projection.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gts/dg_operators.hpp"
#include "gts/problems.hpp"

namespace gts {

enum class Scheme { cg, dg };

inline const char* scheme_name(Scheme s) { return s == Scheme::cg ? "cg" : "dg"; }

struct SolverConfig {
    double fp_tolerance = 1e-12;
    int fp_max_iters = 200;
    int quad_nodes = -1;  // -1 = auto, r + 4
    std::optional<Mat> subspace_basis;  // orthonormal columns spanning H_m
    std::optional<double> kappa;  // ball radius for the containment check

    int effective_quad_nodes(int r) const { return quad_nodes > 0 ? quad_nodes : r + 4; }

    void validate() const {
        if (!(fp_tolerance > 0.0) || fp_max_iters < 1)
            throw std::invalid_argument("SolverConfig: fp_tolerance > 0, fp_max_iters >= 1");
        if (subspace_basis) {
            Mat g = subspace_basis->transpose() * (*subspace_basis);
            if ((g - Mat::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() > 1e-12)
                throw std::invalid_argument("SolverConfig: subspace basis not orthonormal");
        }
    }
};

struct NonConvergence : std::runtime_error {
    NonConvergence(int iters, double delta, int interval = -1)
        : std::runtime_error("Picard iteration did not converge after " + std::to_string(iters) +
                             " iterations (last delta " + std::to_string(delta) +
                             (interval >= 0 ? ", interval " + std::to_string(interval) : "") +
                             "); shrink the time step"),
          iterations(iters),
          last_delta(delta),
          interval_index(interval) {}
    int iterations;
    double last_delta;
    int interval_index;
};

struct StepResult {
    PolyTraj traj;
    int iterations = 0;
    double residual = 0.0;
    Vec left_value;   // U_{m-1}^+
    Vec right_value;  // U_m^-
    bool ball_violation = false;
};

struct Trajectory {
    std::vector<StepResult> pieces;
    std::vector<double> nodes;  // t_0 < t_1 < ... < t_M
    Scheme scheme = Scheme::cg;
    std::vector<int> degrees;
};

/// H-orthogonal projection onto span(basis); identity when no basis is given.
inline Vec subspace_project(const Vec& x, const std::optional<Mat>& basis) {
    if (!basis) return x;
    return (*basis) * (basis->transpose() * x);
}

namespace detail {

/// Sup-norm of the difference of two same-degree trajectories on the
/// Chebyshev sample grid used by sup_norm.
inline double iterate_delta(const PolyTraj& a, const PolyTraj& b) {
    auto xs = chebyshev_samples(std::max(a.degree(), b.degree()));
    double best = 0.0;
    for (double x : xs) best = std::max(best, (a.eval_reference(x) - b.eval_reference(x)).norm());
    return best;
}

/// Projection of F along the current iterate onto degree r, with the subspace
/// projection applied to the sampled values.
inline PolyTraj project_rhs(const Problem& problem, const PolyTraj& u, int r,
                            const SolverConfig& cfg) {
    const QuadRule& quad = gauss_rule(std::max(cfg.effective_quad_nodes(r), r + 1));
    return project_l2(
        [&](double t) { return subspace_project(problem.rhs(t, u.eval(t)), cfg.subspace_basis); },
        u.map(), r, quad);
}

/// Pin the left value of a trajectory to the target exactly by adjusting the
/// constant coefficient; iterated until the floating-point evaluation at the
/// left endpoint reproduces the target bit for bit (or stops changing).
inline void pin_left_value(PolyTraj& p, const Vec& target) {
    for (int pass = 0; pass < 4; ++pass) {
        Vec err = target - p.left_value();
        if ((err.array() == 0.0).all()) return;
        p.coeffs().row(0) += err.transpose();
    }
}

}  // namespace detail

/// One cG step: trial degree r+1 fixed point of
/// U = pi(u_prev) + int_{t_{m-1}}^t Pi^r F(U), Picard from the constant initial
/// guess pi(u_prev).
inline StepResult cg_step(const Problem& problem, const Vec& u_prev, IntervalMap map, int r,
                          const SolverConfig& cfg) {
    cfg.validate();
    if (r < 0) throw std::invalid_argument("cg_step: degree must be >= 0");
    Vec u_start = subspace_project(u_prev, cfg.subspace_basis);
    PolyTraj u = PolyTraj::constant(map, u_start, r + 1);
    double delta = 0.0;
    for (int it = 1; it <= cfg.fp_max_iters; ++it) {
        PolyTraj g = detail::project_rhs(problem, u, r, cfg);
        PolyTraj next = g.antiderivative_from_left();
        next.coeffs().row(0) += u_start.transpose();
        detail::pin_left_value(next, u_start);
        delta = detail::iterate_delta(next, u);
        u = next;
        double sup = sup_norm(u).value;
        // Diverging iterates overflow to inf/NaN; never accept those.
        if (u.coeffs().allFinite() && std::isfinite(delta) && std::isfinite(sup) &&
            delta <= cfg.fp_tolerance * (1.0 + sup)) {
            StepResult res{u, it, delta, u.left_value(), u.right_value(), false};
            if (cfg.kappa)
                res.ball_violation = sup_norm(u - PolyTraj::constant(map, u_start, u.degree())).value >
                                     *cfg.kappa;
            return res;
        }
    }
    throw NonConvergence(cfg.fp_max_iters, delta);
}

/// One dG step: degree r fixed point of U = pi(u_prev^-) + chi^{-1}(Pi^r F(U)),
/// Picard from the constant initial guess pi(u_prev^-).
inline StepResult dg_step(const Problem& problem, const Vec& u_prev_minus, IntervalMap map, int r,
                          const SolverConfig& cfg) {
    cfg.validate();
    if (r < 0) throw std::invalid_argument("dg_step: degree must be >= 0");
    Vec u_start = subspace_project(u_prev_minus, cfg.subspace_basis);
    auto chi = chi_build(r, map);
    PolyTraj u = PolyTraj::constant(map, u_start, r);
    double delta = 0.0;
    for (int it = 1; it <= cfg.fp_max_iters; ++it) {
        PolyTraj g = detail::project_rhs(problem, u, r, cfg);
        PolyTraj next = chi->solve(g);
        next.coeffs().row(0) += u_start.transpose();
        delta = detail::iterate_delta(next, u);
        u = next;
        double sup = sup_norm(u).value;
        if (u.coeffs().allFinite() && std::isfinite(delta) && std::isfinite(sup) &&
            delta <= cfg.fp_tolerance * (1.0 + sup)) {
            StepResult res{u, it, delta, u.left_value(), u.right_value(), false};
            if (cfg.kappa)
                res.ball_violation = sup_norm(u - PolyTraj::constant(map, u_start, u.degree())).value >
                                     *cfg.kappa;
            return res;
        }
    }
    throw NonConvergence(cfg.fp_max_iters, delta);
}

/// Quadrature-evaluated Galerkin residual of an accepted step: the maximum over
/// Legendre test functions V_j, j <= r, of the weak-form residual, computed
/// with the same quadrature rule that the step solver used.
inline double weak_residual(const Problem& problem, const Vec& u_prev, const StepResult& step,
                            Scheme scheme, int r, const SolverConfig& cfg) {
    const PolyTraj& u = step.traj;
    const IntervalMap& map = u.map();
    const QuadRule& quad = gauss_rule(std::max(cfg.effective_quad_nodes(r), r + 1));
    PolyTraj du = u.derivative();
    double worst = 0.0;
    Vec u_start = subspace_project(u_prev, cfg.subspace_basis);
    for (int j = 0; j <= r; ++j) {
        // Residual against the j-th test function, per component, then the
        // Euclidean norm across components.
        Vec acc = Vec::Zero(u.dim());
        for (int q = 0; q < quad.size(); ++q) {
            double x = quad.nodes[q];
            double t = map.to_time(x);
            Vec f = subspace_project(problem.rhs(t, u.eval_reference(x)), cfg.subspace_basis);
            acc += quad.weights[q] * legendre_eval(j, x) * (du.eval_reference(x) - f);
        }
        acc *= 0.5 * map.k;  // dt = (k/2) dxhat
        if (scheme == Scheme::dg) {
            // Jump term ([U]_{m-1}, V_{m-1}^+); V_j(-1) = (-1)^j.
            Vec jump = step.left_value - u_start;
            acc += (j % 2 ? -1.0 : 1.0) * jump;
        }
        worst = std::max(worst, acc.norm());
    }
    return worst;
}

/// Chain steps over a fixed mesh, passing the right-end value forward.
inline Trajectory solve_mesh(const Problem& problem, const std::vector<double>& nodes,
                             const std::vector<int>& degrees, Scheme scheme,
                             const SolverConfig& cfg) {
    if (nodes.size() < 2) throw std::invalid_argument("solve_mesh: need at least two nodes");
    if (degrees.size() != nodes.size() - 1)
        throw std::invalid_argument("solve_mesh: degrees length must match interval count");
    for (size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw std::invalid_argument("solve_mesh: nodes must be strictly increasing");
    Trajectory traj;
    traj.nodes = nodes;
    traj.degrees = degrees;
    traj.scheme = scheme;
    Vec u = problem.u0;
    for (size_t m = 0; m + 1 < nodes.size(); ++m) {
        IntervalMap map(nodes[m], nodes[m + 1] - nodes[m]);
        try {
            StepResult step = scheme == Scheme::cg
                                  ? cg_step(problem, u, map, degrees[m], cfg)
                                  : dg_step(problem, u, map, degrees[m], cfg);
            u = step.right_value;
            traj.pieces.push_back(std::move(step));
        } catch (const NonConvergence& e) {
            throw NonConvergence(e.iterations, e.last_delta, static_cast<int>(m));
        }
    }
    return traj;
}

}  // namespace gts
