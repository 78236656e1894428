#pragma once

// The lifting operator L_m^r, the discrete dG time operator
// chi(U) = U' + L_m(U(t_{m-1}^+)), and its inverse, as dense linear maps on
// Legendre coefficients. chi acts componentwise on the N vector components.

#include <Eigen/Dense>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <shared_mutex>
#include <utility>

#include "gts/poly_traj.hpp"

namespace gts {

/// Lifting on the reference interval: the unique element of P^r with
/// int (Lhat(z), V) dthat = (z, V(-1)) for all test polynomials V. Closed form
/// Lhat(z) = z * sum_i (-1)^i (2i+1)/2 K_i.
inline PolyTraj lifting_reference(const Vec& z, int r) {
    Mat c(r + 1, z.size());
    for (int i = 0; i <= r; ++i) c.row(i) = ((i % 2 ? -1.0 : 1.0) * (2.0 * i + 1.0) / 2.0) * z.transpose();
    return PolyTraj(IntervalMap(-1.0, 2.0), std::move(c));
}

/// Lifting on a time interval; scaling L_m(z) o F_m = (2/k) Lhat(z).
inline PolyTraj lifting(const Vec& z, IntervalMap map, int r) {
    Mat c(r + 1, z.size());
    for (int i = 0; i <= r; ++i)
        c.row(i) = ((i % 2 ? -1.0 : 1.0) * (2.0 * i + 1.0) / map.k) * z.transpose();
    return PolyTraj(map, std::move(c));
}

class ChiOperator {
public:
    ChiOperator(int degree, double k) : degree_(degree), k_(k), forward_(assemble(degree, k)), lu_(forward_) {}

    int degree() const { return degree_; }
    double k() const { return k_; }
    const Mat& forward_matrix() const { return forward_; }

    PolyTraj apply(const PolyTraj& p) const {
        check(p);
        Mat c = forward_ * p.coeffs();
        return PolyTraj(p.map(), std::move(c));
    }

    PolyTraj solve(const PolyTraj& v) const {
        check(v);
        Mat c = lu_.solve(v.coeffs());
        return PolyTraj(v.map(), std::move(c));
    }

private:
    static Mat assemble(int r, double k) {
        Mat m = Mat::Zero(r + 1, r + 1);
        // Derivative part: row j, column i gets (2j+1)*2/k for i > j, i+j odd.
        for (int j = 0; j <= r; ++j)
            for (int i = j + 1; i <= r; i += 2) m(j, i) = (2.0 * j + 1.0) * 2.0 / k;
        // Lifting of the left value U(-1) = sum_i (-1)^i a_i: rank-one term
        // (2j+1)/k * (-1)^{i+j}.
        for (int j = 0; j <= r; ++j)
            for (int i = 0; i <= r; ++i) m(j, i) += (2.0 * j + 1.0) / k * (((i + j) % 2) ? -1.0 : 1.0);
        return m;
    }

    void check(const PolyTraj& p) const {
        if (p.degree() != degree_ || p.map().k != k_)
            throw std::invalid_argument("ChiOperator: degree/interval mismatch");
    }

    int degree_;
    double k_;
    Mat forward_;
    Eigen::PartialPivLU<Mat> lu_;
};

/// Shared per-(degree, k) cache; safe for concurrent reads with exclusive insertion.
inline std::shared_ptr<const ChiOperator> chi_build(int r, IntervalMap map) {
    using Key = std::pair<int, std::uint64_t>;
    static std::map<Key, std::shared_ptr<const ChiOperator>> cache;
    static std::shared_mutex mtx;
    std::uint64_t kbits;
    std::memcpy(&kbits, &map.k, sizeof kbits);
    Key key{r, kbits};
    {
        std::shared_lock lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    std::unique_lock lock(mtx);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_shared<const ChiOperator>(r, map.k)).first;
    return it->second;
}

}  // namespace gts
