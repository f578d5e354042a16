#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bvm/expfam.hpp"
#include "bvm/rng.hpp"
#include "bvm/solvers.hpp"
#include "bvm/standardize.hpp"

namespace bvm {

struct ExpectationEstimate {
    double value = 0.0;
    double std_error = 0.0;  // CLT-based; 0 for deterministic quadrature
    std::string method;      // "quad1d" | "quad2d" | "mc"
    std::size_t count = 0;   // samples or nodes
    double refine_diff = 0.0;  // quadrature refinement diagnostic
};

// A posterior distribution over the natural parameter: normalized density,
// a quadrature window covering all but ~1e-14 of the mass, and (for the
// conjugate families) an exact sampler and 1-D CDF.
class PosteriorDist {
public:
    virtual ~PosteriorDist() = default;

    virtual std::size_t dim() const = 0;
    virtual std::string family() const = 0;
    virtual double log_pdf(const std::vector<double>& theta) const = 0;
    virtual std::vector<std::array<double, 2>> window() const = 0;

    virtual bool can_sample() const { return false; }
    virtual void sample(CounterRng&, std::vector<double>&) const {
        throw Error("sampling not available for " + family());
    }

    // 1-D families only.
    virtual double cdf(double) const {
        throw Error("cdf not available for " + family());
    }
    virtual std::array<double, 2> support1d() const {
        throw Error("1-D support not available for " + family());
    }

    double pdf(const std::vector<double>& theta) const {
        return std::exp(log_pdf(theta));
    }
    double pdf1(double theta) const { return pdf(std::vector<double>{theta}); }
};

// Conjugate families, in natural-parameter space.
std::unique_ptr<PosteriorDist> make_gamma_posterior(double shape, double rate);
std::unique_ptr<PosteriorDist> make_log_gamma_posterior(double shape, double rate);
std::unique_ptr<PosteriorDist> make_logit_beta_posterior(double a, double b);
std::unique_ptr<PosteriorDist> make_log_beta_posterior(double a, double b);
std::unique_ptr<PosteriorDist> make_logistic_dirichlet_posterior(
    std::vector<double> alpha);
// Natural-parameter normal-gamma: density prop. to
//   exp(theta1*A - theta2*B - c*theta1^2/theta2) * theta2^d on R x (0, inf).
std::unique_ptr<PosteriorDist> make_normal_gamma_posterior(double A, double B,
                                                           double c, double d);

// Numeric fallback for arbitrary (model, prior) at dim <= 2: normalizes
// exp(theta . T - lambda(theta)) by quadrature over a window centered at the
// mode. Quadrature-only (no sampler).
std::unique_ptr<PosteriorDist> make_numeric_posterior(const PosteriorContext& ctx);

struct ExpectOptions {
    enum class Method { Auto, Quadrature, MonteCarlo };
    Method method = Method::Auto;
    std::size_t mc_samples = 200000;
    std::uint64_t seed = 0;
    std::uint64_t stream = 1;
    int nodes_per_axis = 160;  // 2-D tensor quadrature (clamped to 200)
    double rel_tol = 1e-10;    // 1-D adaptive quadrature
};

using ThetaFn = std::function<double(const std::vector<double>&)>;
using ThetaPredicate = std::function<bool(const std::vector<double>&)>;

// E[f(theta)] under the posterior. Auto: quadrature for dim <= 2, Monte
// Carlo otherwise. Throws NonFinite if f blows up at a node/sample.
ExpectationEstimate expect(const PosteriorDist& post, const ThetaFn& f,
                           const ExpectOptions& opts = {});

struct ConditionalEstimate {
    ExpectationEstimate conditional;  // E[f | A]
    double probability = 0.0;         // P[A]
};

ConditionalEstimate conditional_expect(const PosteriorDist& post, const ThetaFn& f,
                                       const ThetaPredicate& region,
                                       const ExpectOptions& opts = {});

struct AbsMoments {
    std::vector<double> first;   // E|w_u|
    std::vector<double> second;  // E[w_u^2]
    std::vector<double> first_se;
    std::vector<double> second_se;
};

// Per-coordinate absolute moments of the standardized posterior.
AbsMoments abs_moments(const PosteriorDist& post, const Standardization& s,
                       const ExpectOptions& opts = {});

// Law of w = scale * (theta - center) for a 1-D posterior: the change of
// variables through the standardization, no density estimation involved.
struct Pushforward1D {
    const PosteriorDist* post;
    double center;
    double inv_scale;  // 1 / scale

    double cdf(double w) const { return post->cdf(center + inv_scale * w); }
    double pdf(double w) const {
        return post->pdf1(center + inv_scale * w) * inv_scale;
    }
    std::array<double, 2> window() const {
        const auto b = post->window()[0];
        return {(b[0] - center) / inv_scale, (b[1] - center) / inv_scale};
    }
};

Pushforward1D pushforward_1d(const PosteriorDist& post, const Standardization& s);

// Same for k = 2: density of w = scale * (theta - center).
struct Pushforward2D {
    const PosteriorDist* post;
    const Standardization* s;

    double pdf(const std::vector<double>& w) const {
        return post->pdf(s->inverse(w)) * std::abs(s->inv_scale_det);
    }
};

}  // namespace bvm
