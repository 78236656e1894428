#pragma once

// Blow-up machinery: the step-parameter function Psi and its root, rho
// admissibility, the adaptive step-size rules, the blow-up time marching loop,
// and the diagnostic growth/bound constants.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gts/growth.hpp"
#include "gts/stepping.hpp"

namespace gts {

/// Psi(rho) = (delta (gamma - rho alpha)^beta - rho alpha gamma^beta) / (gamma - rho alpha),
/// strictly decreasing on [0, gamma/alpha).
inline double psi(double rho, const GrowthParams& p) {
    p.validate();
    if (!(rho >= 0.0) || !(rho < p.gamma / p.alpha))
        throw std::invalid_argument("psi: rho must lie in [0, gamma/alpha)");
    double d = p.gamma - rho * p.alpha;
    return (p.delta * std::pow(d, p.beta) - rho * p.alpha * std::pow(p.gamma, p.beta)) / d;
}

/// The unique zero of Psi in [0, gamma/alpha); bisection to 1e-12.
inline double psi_root(const GrowthParams& p) {
    p.validate();
    if (!(p.gamma > 0.0)) throw std::invalid_argument("psi_root: gamma must be positive");
    double lo = 0.0;
    double hi = p.gamma / p.alpha * (1.0 - 1e-9);
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        (psi(mid, p) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Largest admissible rho: min(rho_0, alpha^{-1} gamma / (1 + (1 - c_F/||u0||)^{-1})).
inline double rho_max(const GrowthParams& p, double u0_norm, double rho_0) {
    p.validate();
    if (!(u0_norm > p.c_F))
        throw std::invalid_argument("rho_max: requires ||u0|| > c_F");
    double root = psi_root(p);
    if (!(rho_0 > 0.0) || !(rho_0 < std::min(1.0, root)))
        throw std::invalid_argument("rho_max: requires 0 < rho_0 < min(1, psi root)");
    double second = (p.gamma / p.alpha) / (1.0 + 1.0 / (1.0 - p.c_F / u0_norm));
    return std::min(rho_0, second);
}

enum class StepMode { theoretical, empirical };

/// Step-size rule parameters. In theoretical mode the rule is
///   k_m = c^{-1} gamma^{-beta} rho (gamma - rho alpha)^{beta-1} ||U_{m-1}^-||^{1-beta},
/// in empirical mode k_m = rho ||U_{m-1}^-||^{1-beta} (the rule used in the
/// numerical experiments; at beta = 2 it is rho/||U||).
struct StepPlan {
    double rho = 0.0;
    StepMode mode = StepMode::empirical;
    double c = 1.0;      // scheme constant: 1 for cG, 2 (= C_chi) for dG
    double rho_0 = 0.0;  // only used in theoretical mode

    void validate(const GrowthParams& p, double u0_norm) const {
        if (!(rho > 0.0)) throw std::invalid_argument("StepPlan: rho must be positive");
        if (mode == StepMode::theoretical) {
            double rmax = rho_max(p, u0_norm, rho_0);
            if (rho > rmax + 1e-15)
                throw std::invalid_argument("StepPlan: rho exceeds admissible maximum " +
                                            std::to_string(rmax));
        }
    }

    /// eta_m = rho alpha (gamma - rho alpha)^{-1}.
    double eta(const GrowthParams& p) const { return rho * p.alpha / (p.gamma - rho * p.alpha); }

    /// Ball radius kappa_m = eta_m ||U_{m-1}^-||.
    double kappa(const GrowthParams& p, double prev_norm) const { return eta(p) * prev_norm; }
};

inline StepPlan make_plan(StepMode mode, double rho, Scheme scheme, double rho_0 = 0.0) {
    return StepPlan{rho, mode, scheme == Scheme::cg ? 1.0 : 2.0, rho_0};
}

inline double step_size(const StepPlan& plan, const GrowthParams& p, double prev_norm) {
    if (!(prev_norm > 0.0)) throw std::invalid_argument("step_size: prev_norm must be positive");
    if (plan.mode == StepMode::empirical)
        return plan.rho * std::pow(prev_norm, 1.0 - p.beta);
    if (!(plan.rho * p.alpha < p.gamma))
        throw std::invalid_argument("step_size: theoretical mode requires rho alpha < gamma");
    return plan.rho * std::pow(p.gamma - plan.rho * p.alpha, p.beta - 1.0) /
           (plan.c * std::pow(p.gamma, p.beta)) * std::pow(prev_norm, 1.0 - p.beta);
}

/// Upper bound for the continuous blow-up time: ||u0||^{1-beta} / ((beta-1) delta).
inline double continuous_upper_bound(const GrowthParams& p, double u0_norm) {
    p.validate();
    if (!(u0_norm > p.c_F))
        throw std::invalid_argument("continuous_upper_bound: requires ||u0|| > c_F");
    return std::pow(u0_norm, 1.0 - p.beta) / ((p.beta - 1.0) * p.delta);
}

struct BlowupDiagnostics {
    double C0 = 0.0;
    double C1 = 0.0;
    double discrete_upper_bound = 0.0;
    double continuous_upper_bound = 0.0;
};

/// Growth-factor constants and the discrete blow-up time bound
/// (theoretical mode only).
inline BlowupDiagnostics discrete_diagnostics(const GrowthParams& p, const StepPlan& plan,
                                              double u0_norm) {
    if (plan.mode != StepMode::theoretical)
        throw std::invalid_argument("discrete_diagnostics: theoretical mode only");
    plan.validate(p, u0_norm);
    BlowupDiagnostics d;
    d.C0 = psi(plan.rho_0, p) / (plan.c * std::pow(p.gamma, p.beta));
    d.C1 = p.alpha * (plan.rho_0 + 1.0) / (plan.c * (p.gamma - plan.rho_0 * p.alpha));
    double rho = plan.rho;
    d.discrete_upper_bound = rho * std::pow(p.gamma - p.alpha * rho, p.beta - 1.0) /
                             (plan.c * std::pow(p.gamma, p.beta)) *
                             std::pow(u0_norm, 1.0 - p.beta) /
                             (1.0 - std::pow(1.0 + d.C0 * rho, 1.0 - p.beta));
    d.continuous_upper_bound = continuous_upper_bound(p, u0_norm);
    return d;
}

enum class StopReason { saturation, tolerance };

struct BlowupResult {
    double t_infinity_estimate = 0.0;  // accumulated discrete blow-up time
    int steps = 0;                     // number of solved steps
    std::vector<double> norms;         // ||U_m^-|| per solved step
    std::vector<double> step_sizes;    // every k_m accumulated into the estimate
    StopReason stopped_by = StopReason::saturation;
    std::optional<BlowupDiagnostics> diagnostics;  // theoretical mode only
    double continuous_bound = 0.0;
    int geo_violations = 0;   // steps outside the [1+C0 rho, 1+C1 rho] growth band
    int ball_violations = 0;  // Picard iterates leaving the containment ball
};

/// Adaptive blow-up time marching: compute k_m from the previous nodal norm,
/// accumulate the estimate, solve the step while k_m exceeds the tolerance tau,
/// and stop unconditionally once the accumulated time saturates in floating
/// point (T + k == T).
inline BlowupResult blowup_run(const Problem& problem, const GrowthParams& params,
                               const StepPlan& plan, Scheme scheme, int degree,
                               const SolverConfig& cfg, double tau = 0.0) {
    params.validate();
    double norm = problem.u0.norm();
    if (!(norm > params.c_F))
        throw std::invalid_argument("blowup_run: requires ||u0|| > c_F");
    plan.validate(params, norm);

    BlowupResult result;
    result.continuous_bound = continuous_upper_bound(params, norm);
    if (plan.mode == StepMode::theoretical)
        result.diagnostics = discrete_diagnostics(params, plan, norm);

    SolverConfig step_cfg = cfg;
    Vec u = problem.u0;
    double t = 0.0;
    while (true) {
        double k = step_size(plan, params, norm);
        if (t + k == t) {
            result.stopped_by = StopReason::saturation;
            break;
        }
        double t_start = t;
        t += k;
        result.step_sizes.push_back(k);
        if (k <= tau) {
            result.stopped_by = StopReason::tolerance;
            break;
        }
        if (plan.mode == StepMode::theoretical)
            step_cfg.kappa = plan.kappa(params, norm);
        StepResult step = [&] {
            try {
                return scheme == Scheme::cg
                           ? cg_step(problem, u, IntervalMap(t_start, k), degree, step_cfg)
                           : dg_step(problem, u, IntervalMap(t_start, k), degree, step_cfg);
            } catch (const NonConvergence& e) {
                throw NonConvergence(e.iterations, e.last_delta, result.steps);
            }
        }();
        if (step.ball_violation) ++result.ball_violations;
        double new_norm = step.right_value.norm();
        if (plan.mode == StepMode::theoretical) {
            double ratio = new_norm / norm;
            double lo = 1.0 + result.diagnostics->C0 * plan.rho;
            double hi = 1.0 + result.diagnostics->C1 * plan.rho;
            if (ratio < lo * (1.0 - 1e-12) || ratio > hi * (1.0 + 1e-12)) ++result.geo_violations;
        }
        u = step.right_value;
        norm = new_norm;
        result.norms.push_back(norm);
        ++result.steps;
    }
    result.t_infinity_estimate = t;
    return result;
}

}  // namespace gts
