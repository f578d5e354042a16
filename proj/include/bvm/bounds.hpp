#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bvm/posterior.hpp"
#include "bvm/solvers.hpp"
#include "bvm/standardize.hpp"

namespace bvm {

enum class Metric { TV, Wass, SmoothH };
const char* to_string(Metric m);

// Growth spec P(w) = A + sum_m B_m |w_m|^{r_m} for smooth-test-function bounds.
struct PolynomialSpec {
    double a = 0.0;
    std::vector<double> b;
    std::vector<double> r;
};

struct EngineOptions {
    int upsilon_nodes = 32;  // G per axis of the inner double integral
    ExpectOptions expect;
    bool experimental = false;
};

struct BoundReport {
    std::string theorem;
    Metric metric = Metric::TV;
    StdKind standardization = StdKind::Mode;
    std::size_t n = 0;
    double value = 0.0;
    double clamped = 0.0;  // min(value, 1) for TV, else value
    double std_error = 0.0;
    double epsilon = 0.0;  // 0 when not applicable
    double r = 0.0;
    int upsilon_nodes = 32;
    std::uint64_t seed = 0;
    double skipped_mass = 0.0;
    bool unreliable = false;
    AssumptionFlags flags;
};

std::string bound_csv_header();
std::string bound_csv_row(const BoundReport& rep);

// Third-derivative source entering an Upsilon kernel: the full lambda tensor
// or the likelihood part n * beta''' alone (weak-prior and split variants).
enum class ThirdSource { Lambda, LikelihoodPart };

// The Taylor-remainder kernel
//   Upsilon_{l,u,v}(w) = E[ Y2 * d3(Y1 Y2 * inv_scale * w + center) ],
// evaluated by a G x G tensor Gauss-Legendre rule over (Y1, Y2).
class UpsilonKernel {
public:
    UpsilonKernel(const PosteriorContext& ctx, const Standardization& s,
                  ThirdSource source, int g = 32);

    std::size_t dim() const { return k_; }

    // All (l,u,v) entries at once; false when the integration segment exits
    // the parameter space (the caller skips and flags such points).
    bool eval_all(const std::vector<double>& w, std::vector<double>& out) const;

    // Single entry; throws NonFinite on support exit.
    double eval(std::size_t l, std::size_t u, std::size_t v,
                const std::vector<double>& w) const;

    // Same entry at twice the node count, for the refinement diagnostic.
    double eval_refined(std::size_t l, std::size_t u, std::size_t v,
                        const std::vector<double>& w) const;

    double third(const std::vector<double>& theta, std::size_t l, std::size_t u,
                 std::size_t v) const;

    const Standardization& standardization() const { return *std_; }

private:
    bool eval_with(const UpsilonRule& rule, const std::vector<double>& w,
                   std::vector<double>& out) const;

    const PosteriorContext* ctx_;
    const Standardization* std_;
    ThirdSource source_;
    UpsilonRule rule_;
    UpsilonRule rule_fine_;
    std::size_t k_;
    double n_;
};

using StdRegion = std::function<bool(const std::vector<double>& w)>;

struct DeltaResult {
    ExpectationEstimate estimate;
    double skipped_mass = 0.0;
    double probability = 1.0;  // of the conditioning region
};

// Triple sum  sum_{l,u,v} rs~_l rs_u rs_v E[ |w_u w_v Upsilon_{l,u,v}(w)| ]
// with the row sums taken from the standardization's inv_scale, so the mode
// and MLE variants (including their 1/n powers) share one code path.
// `chi` (optional) multiplies the integrand by sum_m chi_m(w_m).
DeltaResult delta_triple_sum(const PosteriorContext& ctx, const PosteriorDist& post,
                             const Standardization& s, ThirdSource source,
                             const EngineOptions& opts,
                             const StdRegion& region = nullptr,
                             const PolynomialSpec* chi = nullptr);

// Mode-standardized bounds ---------------------------------------------------

std::pair<BoundReport, BoundReport> bound_mode_tv_wass(const PosteriorContext& ctx,
                                                       const PosteriorDist& post,
                                                       const EngineOptions& opts = {});

BoundReport bound_mode_tv_local(const PosteriorContext& ctx,
                                const PosteriorDist& post, const StdRegion& region,
                                const EngineOptions& opts = {});

BoundReport bound_mode_tv_corollary(const PosteriorContext& ctx,
                                    const PosteriorDist& post, double epsilon,
                                    double r, const EngineOptions& opts = {});

BoundReport bound_mode_smooth(const PosteriorContext& ctx, const PosteriorDist& post,
                              const PolynomialSpec& p,
                              const EngineOptions& opts = {});

enum class UniVariant { Wass, Tv, TvEps };

BoundReport bound_mode_univariate(const PosteriorContext& ctx,
                                  const PosteriorDist& post, UniVariant variant,
                                  double epsilon = 0.0,
                                  const EngineOptions& opts = {});

// MLE-standardized bounds ------------------------------------------------------

std::pair<BoundReport, BoundReport> bound_mle_full(const PosteriorContext& ctx,
                                                   const PosteriorDist& post,
                                                   const EngineOptions& opts = {});

BoundReport bound_mle_smooth(const PosteriorContext& ctx, const PosteriorDist& post,
                             const PolynomialSpec& p, const EngineOptions& opts = {});

BoundReport bound_mle_univariate(const PosteriorContext& ctx,
                                 const PosteriorDist& post, UniVariant variant,
                                 const EngineOptions& opts = {});

// Weak-prior variant: only first derivatives of eta are needed; their
// posterior expectation is replaced by eta_grad_sup when the prior carries one.
std::pair<BoundReport, BoundReport> bound_mle_weak(const PosteriorContext& ctx,
                                                   const PosteriorDist& post,
                                                   const EngineOptions& opts = {});

// Mode standardization under a merely twice-differentiable prior exponent.
// Stated in the source paper trail without a numbered theorem; activated only
// via EngineOptions::experimental.
std::pair<BoundReport, BoundReport> bound_mode_experimental(
    const PosteriorContext& ctx, const PosteriorDist& post,
    const EngineOptions& opts);

// Shared lower bound / diagnostics ---------------------------------------------

// ||E[theta^*]||_2 (absolute mean for k = 1).
double wass_lower_bound(const PosteriorContext& ctx, const PosteriorDist& post,
                        const Standardization& s, const EngineOptions& opts = {});

struct SteinTestFn {
    std::function<std::vector<double>(const std::vector<double>&)> grad;
    std::function<double(const std::vector<double>&)> laplacian;
};

// Monte-Carlo estimate of E[T f(w)] for the posterior's Stein density
// operator under the given standardization; should vanish within noise.
ExpectationEstimate stein_residual(const PosteriorContext& ctx,
                                   const PosteriorDist& post,
                                   const Standardization& s, const SteinTestFn& f,
                                   std::size_t samples, std::uint64_t seed);

}  // namespace bvm
