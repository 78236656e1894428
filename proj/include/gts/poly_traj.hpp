#pragma once

// Vector-valued polynomial trajectories on a time interval, stored as Legendre
// coefficients, with evaluation, calculus, norms, and the local L2 projection.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "gts/legendre.hpp"

namespace gts {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct NormEstimate {
    double value = 0.0;
    int sample_count = 0;
};

/// Polynomial piece U|_{I_m} of degree r with values in R^N. Row i of the
/// coefficient matrix holds the vector coefficient of K_i composed with the
/// inverse interval map.
class PolyTraj {
public:
    PolyTraj(IntervalMap map, Mat coeffs) : map_(map), coeffs_(std::move(coeffs)) {
        if (coeffs_.rows() < 1) throw std::invalid_argument("PolyTraj: empty coefficient matrix");
    }

    static PolyTraj constant(IntervalMap map, const Vec& v, int degree = 0) {
        Mat c = Mat::Zero(degree + 1, v.size());
        c.row(0) = v.transpose();
        return PolyTraj(map, std::move(c));
    }

    static PolyTraj zero(IntervalMap map, int degree, int dim) {
        return PolyTraj(map, Mat::Zero(degree + 1, dim));
    }

    const IntervalMap& map() const { return map_; }
    int degree() const { return static_cast<int>(coeffs_.rows()) - 1; }
    int dim() const { return static_cast<int>(coeffs_.cols()); }
    const Mat& coeffs() const { return coeffs_; }
    Mat& coeffs() { return coeffs_; }

    /// Value at reference coordinate xhat in [-1,1].
    Vec eval_reference(double xhat) const {
        Vec out = Vec::Zero(dim());
        for (int i = 0; i <= degree(); ++i) out += legendre_eval(i, xhat) * coeffs_.row(i).transpose();
        return out;
    }

    Vec eval(double t) const { return eval_reference(map_.to_reference(t)); }

    /// One-sided limit at the left node, U_{m-1}^+.
    Vec left_value() const { return eval_reference(-1.0); }
    /// One-sided limit at the right node, U_m^-.
    Vec right_value() const { return eval_reference(1.0); }

    /// Time derivative; chain-rule factor 2/k. Degree max(r-1, 0).
    PolyTraj derivative() const {
        int r = degree();
        int rd = std::max(r - 1, 0);
        Mat d = Mat::Zero(rd + 1, dim());
        // b_j = (2j+1) * sum of a_i for i > j with i+j odd, then scaled by 2/k.
        for (int j = 0; j <= rd; ++j) {
            for (int i = j + 1; i <= r; i += 2) d.row(j) += coeffs_.row(i);
            d.row(j) *= (2.0 * j + 1.0) * 2.0 / map_.k;
        }
        return PolyTraj(map_, std::move(d));
    }

    /// Antiderivative vanishing at the left node: t -> integral of p from
    /// t_start to t. Degree r+1. Uses the indefinite-integral relation
    /// int K_{i-1} = (K_i - K_{i-2})/(2i-1).
    PolyTraj antiderivative_from_left() const {
        int r = degree();
        Mat c = Mat::Zero(r + 2, dim());
        // Reference antiderivative from -1, then scale by dt/dxhat = k/2.
        c.row(0) += coeffs_.row(0);  // int K_0 = K_1 + K_0
        c.row(1) += coeffs_.row(0);
        for (int i = 1; i <= r; ++i) {
            c.row(i + 1) += coeffs_.row(i) / (2.0 * i + 1.0);
            c.row(i - 1) -= coeffs_.row(i) / (2.0 * i + 1.0);
        }
        c *= 0.5 * map_.k;
        return PolyTraj(map_, std::move(c));
    }

    PolyTraj operator+(const PolyTraj& o) const { return combine(o, 1.0); }
    PolyTraj operator-(const PolyTraj& o) const { return combine(o, -1.0); }
    PolyTraj operator*(double s) const {
        Mat c = coeffs_ * s;
        return PolyTraj(map_, std::move(c));
    }

private:
    PolyTraj combine(const PolyTraj& o, double sign) const {
        if (!(map_ == o.map_) || dim() != o.dim())
            throw std::invalid_argument("PolyTraj: interval/dimension mismatch");
        int r = std::max(degree(), o.degree());
        Mat c = Mat::Zero(r + 1, dim());
        c.topRows(degree() + 1) = coeffs_;
        c.topRows(o.degree() + 1) += sign * o.coeffs_;
        return PolyTraj(map_, std::move(c));
    }

    IntervalMap map_;
    Mat coeffs_;
};

/// L2 projection of a time-dependent vector function onto degree-r polynomials
/// on the interval, evaluated with the given quadrature rule:
///   coefficient_i = (2i+1)/2 * sum_q w_q f(F(x_q)) K_i(x_q).
inline PolyTraj project_l2(const std::function<Vec(double)>& f, IntervalMap map, int degree,
                           const QuadRule& quad) {
    if (quad.size() < degree + 1)
        throw std::invalid_argument("project_l2: quadrature rule has too few nodes");
    std::vector<Vec> samples(quad.size());
    for (int q = 0; q < quad.size(); ++q) samples[q] = f(map.to_time(quad.nodes[q]));
    Mat c = Mat::Zero(degree + 1, samples[0].size());
    for (int i = 0; i <= degree; ++i) {
        for (int q = 0; q < quad.size(); ++q)
            c.row(i) += quad.weights[q] * legendre_eval(i, quad.nodes[q]) * samples[q].transpose();
        c.row(i) *= (2.0 * i + 1.0) / 2.0;
    }
    return PolyTraj(map, std::move(c));
}

/// Chebyshev-Lobatto sample grid on [-1,1] with both endpoints, 4(r+1)+1 points.
inline std::vector<double> chebyshev_samples(int degree) {
    int s = 4 * (degree + 1) + 1;
    std::vector<double> xs(s);
    for (int j = 0; j < s; ++j) xs[j] = -std::cos(M_PI * j / (s - 1));
    xs.front() = -1.0;
    xs.back() = 1.0;
    return xs;
}

/// Estimate of the L-infinity norm over the interval by Chebyshev-Lobatto
/// sampling (endpoint-exact; an estimate, not a certified maximum).
inline NormEstimate sup_norm(const PolyTraj& p) {
    auto xs = chebyshev_samples(p.degree());
    double best = 0.0;
    size_t best_j = 0;
    for (size_t j = 0; j < xs.size(); ++j) {
        double v = p.eval_reference(xs[j]).norm();
        if (v > best) {
            best = v;
            best_j = j;
        }
    }
    // Interior maxima land between samples; polish with a ternary search on
    // the bracketing cell pair.
    if (best_j > 0 && best_j + 1 < xs.size()) {
        double lo = xs[best_j - 1], hi = xs[best_j + 1];
        for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
            double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
            if (p.eval_reference(a).norm() < p.eval_reference(b).norm())
                lo = a;
            else
                hi = b;
        }
        best = std::max(best, p.eval_reference(0.5 * (lo + hi)).norm());
    }
    return NormEstimate{best, static_cast<int>(xs.size())};
}

/// L^p norm over the interval: Gauss quadrature with 2(r+1) nodes for p in
/// {1,2}, Chebyshev sampling for p = infinity.
inline double lp_norm(const PolyTraj& p, double pval) {
    if (std::isinf(pval)) return sup_norm(p).value;
    const QuadRule& quad = gauss_rule(2 * (p.degree() + 1));
    double acc = 0.0;
    for (int q = 0; q < quad.size(); ++q)
        acc += quad.weights[q] * std::pow(p.eval_reference(quad.nodes[q]).norm(), pval);
    acc *= 0.5 * p.map().k;
    return std::pow(acc, 1.0 / pval);
}

}  // namespace gts
