#pragma once

#include <vector>

#include "bvm/linalg.hpp"
#include "bvm/solvers.hpp"

namespace bvm {

enum class StdKind { Mode, Mle };

inline const char* to_string(StdKind k) { return k == StdKind::Mode ? "mode" : "mle"; }

// Affine map w = scale * (theta - center) with its inverse precomputed.
// Mode: scale = H_lambda(mode)^{1/2}. Mle: scale = sqrt(n) H_beta(mle)^{1/2},
// so inv_scale = H_beta^{-1/2} / sqrt(n).
struct Standardization {
    StdKind kind;
    std::vector<double> center;
    SymMatrix scale;
    SymMatrix inv_scale;

    std::size_t dim() const { return center.size(); }

    std::vector<double> forward(const std::vector<double>& theta) const {
        std::vector<double> d(theta.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = theta[i] - center[i];
        return scale.mul(d);
    }

    std::vector<double> inverse(const std::vector<double>& w) const {
        std::vector<double> theta = inv_scale.mul(w);
        for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += center[i];
        return theta;
    }

    // |det(inv_scale)| for density pushforward; product of the inverse scale
    // eigenvalues, stored at construction.
    double inv_scale_det;
};

Standardization standardize_mode(const PosteriorContext& ctx);
Standardization standardize_mle(const PosteriorContext& ctx);
Standardization standardize(const PosteriorContext& ctx, StdKind kind);

}  // namespace bvm
