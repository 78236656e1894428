#pragma once

// Built-in initial value problems u' = F(t, u), u(0) = u0, with optional exact
// solutions and growth metadata, plus the radial clipping wrapper.

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "gts/growth.hpp"
#include "gts/poly_traj.hpp"

namespace gts {

using RhsFn = std::function<Vec(double, const Vec&)>;
using ExactFn = std::function<Vec(double)>;

struct Problem {
    std::string name;
    int dim = 1;
    RhsFn rhs;
    Vec u0;
    ExactFn exact;  // empty when no closed form is known
    std::optional<double> t_blowup_exact;
    std::optional<GrowthParams> growth;
};

inline Vec scalar(double x) {
    Vec v(1);
    v[0] = x;
    return v;
}

/// u' = (|u|+1) u / (1 + e^{-t}), u(0) = 3. Exact solution
/// u(t) = 3(e^t + 1)/(5 - 3 e^t), blowing up at t = ln(5/3). Growth constants
/// for c_F = 2: alpha = 3/2, beta = 2, delta = 1/2, gamma = 5/2, L_cF = 5.
inline Problem example_blowup() {
    Problem p;
    p.name = "example54";
    p.dim = 1;
    p.u0 = scalar(3.0);
    p.rhs = [](double t, const Vec& u) {
        return scalar((std::abs(u[0]) + 1.0) * u[0] / (1.0 + std::exp(-t)));
    };
    p.exact = [](double t) {
        double et = std::exp(t);
        return scalar(3.0 * (et + 1.0) / (5.0 - 3.0 * et));
    };
    p.t_blowup_exact = std::log(5.0 / 3.0);
    p.growth = GrowthParams{1.5, 2.0, 0.5, 2.0, 2.5, 5.0};
    return p;
}

/// u' = lambda u with exact solution e^{lambda t} u0.
inline Problem linear_test(double lambda, Vec u0 = scalar(1.0)) {
    Problem p;
    p.name = "linear";
    p.dim = static_cast<int>(u0.size());
    p.u0 = u0;
    p.rhs = [lambda](double, const Vec& u) { return Vec(lambda * u); };
    p.exact = [lambda, u0](double t) { return Vec(std::exp(lambda * t) * u0); };
    return p;
}

/// Scalar u' = alpha |u|^{beta-1} u; satisfies the growth condition with
/// delta = alpha and c_F = 0. For u0 > 0 the solution
/// (u0^{1-beta} - (beta-1) alpha t)^{1/(1-beta)} blows up at
/// t = u0^{1-beta} / ((beta-1) alpha).
inline Problem power_law(double alpha, double beta, double u0 = 1.0) {
    if (!(beta > 1.0) || !(alpha > 0.0))
        throw std::invalid_argument("power_law: require alpha > 0, beta > 1");
    Problem p;
    p.name = "powerlaw";
    p.dim = 1;
    p.u0 = scalar(u0);
    p.rhs = [alpha, beta](double, const Vec& u) {
        return scalar(alpha * std::pow(std::abs(u[0]), beta - 1.0) * u[0]);
    };
    p.exact = [alpha, beta, u0](double t) {
        return scalar(std::pow(std::pow(u0, 1.0 - beta) - (beta - 1.0) * alpha * t,
                               1.0 / (1.0 - beta)));
    };
    p.t_blowup_exact = std::pow(u0, 1.0 - beta) / ((beta - 1.0) * alpha);
    p.growth = GrowthParams{alpha, beta, alpha, 0.0, alpha * beta, 0.0};
    return p;
}

/// Radial clipping: G(t,x) = F(t,x) for ||x|| <= M, else F(t, M x/||x||).
/// Globally Lipschitz whenever F is Lipschitz on the ball of radius M.
inline RhsFn clip_radial(RhsFn f, double M) {
    if (!(M > 0.0)) throw std::invalid_argument("clip_radial: M must be positive");
    return [f = std::move(f), M](double t, const Vec& x) {
        double n = x.norm();
        if (n <= M) return f(t, x);
        return f(t, Vec((M / n) * x));
    };
}

/// Problem registry addressable by name from the CLI.
inline Problem make_problem(const std::string& name, const std::map<std::string, double>& params) {
    auto get = [&](const std::string& key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    if (name == "example54") return example_blowup();
    if (name == "linear") return linear_test(get("lambda", -1.0), scalar(get("u0", 1.0)));
    if (name == "powerlaw")
        return power_law(get("alpha", 1.0), get("beta", 2.0), get("u0", 1.0));
    throw std::invalid_argument("unknown problem: " + name);
}

}  // namespace gts
