#pragma once

#include <cmath>
#include <stdexcept>

namespace gts {

/// Constants of the algebraic growth condition
///   ||F(t,u)|| <= alpha ||u||^beta,  (F(t,u), u) >= delta ||u||^{1+beta}
/// for ||u|| >= c_F, together with the local Lipschitz constant gamma of
/// ||F(t,u)-F(t,v)|| <= gamma max(||u||,||v||)^{beta-1} ||u-v|| and the
/// Lipschitz constant L_cF inside the ball ||u|| <= c_F.
struct GrowthParams {
    double alpha = 0.0;
    double beta = 0.0;
    double delta = 0.0;
    double c_F = 0.0;
    double gamma = 0.0;
    double L_cF = 0.0;

    void validate() const {
        if (!(alpha > 0.0) || !(delta > 0.0) || !(beta > 1.0) || c_F < 0.0 || gamma < 0.0 ||
            L_cF < 0.0 || !std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(delta) ||
            !std::isfinite(gamma))
            throw std::invalid_argument("GrowthParams: require alpha, delta > 0, beta > 1, finite");
    }
};

}  // namespace gts
