#include "bvm/standardize.hpp"

#include <cmath>

namespace bvm {

Standardization standardize_mode(const PosteriorContext& ctx) {
    const SpdFactorization& f = ctx.hess_lambda_at_mode();
    double det = 1.0;
    for (double l : f.eigenvalues) det /= std::sqrt(l);
    return Standardization{StdKind::Mode, ctx.mode(), f.sqrt, f.inv_sqrt, det};
}

Standardization standardize_mle(const PosteriorContext& ctx) {
    const SpdFactorization& f = ctx.hess_beta_at_mle();
    const double rn = std::sqrt(double(ctx.summary.n));
    const std::size_t k = f.sqrt.dim();
    SymMatrix scale(k), inv(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            scale.at(i, j) = rn * f.sqrt(i, j);
            inv.at(i, j) = f.inv_sqrt(i, j) / rn;
        }
    double det = 1.0;
    for (double l : f.eigenvalues) det /= (rn * std::sqrt(l));
    return Standardization{StdKind::Mle, ctx.mle(), scale, inv, det};
}

Standardization standardize(const PosteriorContext& ctx, StdKind kind) {
    return kind == StdKind::Mode ? standardize_mode(ctx) : standardize_mle(ctx);
}

}  // namespace bvm
