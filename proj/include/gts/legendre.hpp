#pragma once

// Reference-interval machinery: Legendre polynomials on (-1,1), Gauss-Legendre
// quadrature, and the affine map between the reference interval and a time step.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace gts {

/// Legendre polynomial K_i on [-1,1], normalized so that K_i(-1) = (-1)^i
/// (equivalently K_i(1) = 1). Three-term recurrence.
inline double legendre_eval(int i, double x) {
    if (i < 0) throw std::invalid_argument("legendre_eval: negative degree");
    if (i == 0) return 1.0;
    if (i == 1) return x;
    double pm1 = 1.0, p = x;
    for (int n = 1; n < i; ++n) {
        double pn1 = ((2.0 * n + 1.0) * x * p - n * pm1) / (n + 1.0);
        pm1 = p;
        p = pn1;
    }
    return p;
}

/// Derivative K_i'(x) for x in the open interval (-1,1).
inline double legendre_deriv(int i, double x) {
    if (i == 0) return 0.0;
    double p = legendre_eval(i, x), pm1 = legendre_eval(i - 1, x);
    return i * (x * p - pm1) / (x * x - 1.0);
}

struct QuadRule {
    std::vector<double> nodes;    // strictly increasing, in (-1,1)
    std::vector<double> weights;  // positive, sum to 2
    int size() const { return static_cast<int>(nodes.size()); }
};

namespace detail {

inline QuadRule compute_gauss_rule(int n) {
    QuadRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    // Newton iteration from Chebyshev initial guesses; only the lower half is
    // computed, the rest follows by symmetry.
    for (int j = 0; j < (n + 1) / 2; ++j) {
        double x = -std::cos(M_PI * (4.0 * (j + 1) - 1.0) / (4.0 * n + 2.0));
        for (int it = 0; it < 100; ++it) {
            double f = legendre_eval(n, x);
            double df = legendre_deriv(n, x);
            double dx = f / df;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double dp = legendre_deriv(n, x);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[j] = x;
        rule.weights[j] = w;
        rule.nodes[n - 1 - j] = -x;
        rule.weights[n - 1 - j] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace detail

/// n-point Gauss-Legendre rule on (-1,1), cached per n.
inline const QuadRule& gauss_rule(int n) {
    if (n < 1) throw std::invalid_argument("gauss_rule: n must be >= 1");
    static std::map<int, QuadRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_rule(n)).first;
    return it->second;
}

/// Affine map between the reference interval (-1,1) and I_m = (t_start, t_start + k).
struct IntervalMap {
    double t_start = 0.0;
    double k = 1.0;  // step length, > 0

    IntervalMap() = default;
    IntervalMap(double t0, double step) : t_start(t0), k(step) {
        if (!(k > 0.0)) throw std::invalid_argument("IntervalMap: step length must be positive");
    }

    double t_end() const { return t_start + k; }

    /// xhat in [-1,1] -> t; maps -1 to t_start and +1 to t_start + k exactly.
    double to_time(double xhat) const {
        if (xhat == -1.0) return t_start;
        if (xhat == 1.0) return t_start + k;
        return t_start + 0.5 * k * (xhat + 1.0);
    }

    /// t in [t_start, t_start+k] -> xhat.
    double to_reference(double t) const {
        if (t == t_start) return -1.0;
        if (t == t_start + k) return 1.0;
        double xhat = 2.0 * (t - t_start) / k - 1.0;
        if (xhat < -1.0 - 1e-12 || xhat > 1.0 + 1e-12)
            throw std::invalid_argument("IntervalMap: time outside interval");
        return std::clamp(xhat, -1.0, 1.0);
    }

    bool operator==(const IntervalMap& o) const { return t_start == o.t_start && k == o.k; }
};

}  // namespace gts
