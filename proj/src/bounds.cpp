#include "bvm/bounds.hpp"

#include <cmath>
#include <cstdio>

#include "bvm/quadrature.hpp"
#include "bvm/stats.hpp"
#include "bvm/vec.hpp"

namespace bvm {

namespace {

const double kTvConst = std::sqrt(8.0 * M_PI) / 3.0;
const double kTailConst = 0.5 * (3.0 + std::sqrt(5.0));
const double kUniTvWeight = std::sqrt(M_PI / 8.0);
constexpr double kSkipLimit = 1e-3;

std::size_t idx3(std::size_t k, std::size_t l, std::size_t u, std::size_t v) {
    return (l * k + u) * k + v;
}

// sum_m chi_m(w_m) with chi_m(w) = A/k + 2^{r_m/2} B_m (|w|^{r_m} + mu_{r_m}).
double chi_sum(const PolynomialSpec& p, const std::vector<double>& w) {
    const std::size_t k = w.size();
    double s = p.a;  // k * (A/k)
    for (std::size_t m = 0; m < k; ++m) {
        const double bm = m < p.b.size() ? p.b[m] : 0.0;
        if (bm == 0.0) continue;
        const double rm = m < p.r.size() ? p.r[m] : 0.0;
        s += std::pow(2.0, 0.5 * rm) * bm *
             (std::pow(std::abs(w[m]), rm) + normal_abs_moment(rm));
    }
    return s;
}

double chi_single(const PolynomialSpec& p, std::size_t m, double wm,
                  std::size_t k) {
    const double bm = m < p.b.size() ? p.b[m] : 0.0;
    const double rm = m < p.r.size() ? p.r[m] : 0.0;
    double s = p.a / double(k);
    if (bm != 0.0)
        s += std::pow(2.0, 0.5 * rm) * bm *
             (std::pow(std::abs(wm), rm) + normal_abs_moment(rm));
    return s;
}

BoundReport make_report(std::string theorem, Metric metric, StdKind kind,
                        const PosteriorContext& ctx, const EngineOptions& opts,
                        double value, double se) {
    BoundReport rep;
    rep.theorem = std::move(theorem);
    rep.metric = metric;
    rep.standardization = kind;
    rep.n = ctx.summary.n;
    rep.value = value;
    rep.clamped = metric == Metric::TV ? std::min(value, 1.0) : value;
    rep.std_error = se;
    rep.upsilon_nodes = opts.upsilon_nodes;
    rep.seed = opts.expect.seed;
    rep.flags = ctx.flags;
    return rep;
}

void attach_delta_diagnostics(BoundReport& rep, const DeltaResult& d) {
    rep.skipped_mass = d.skipped_mass;
    rep.unreliable = d.skipped_mass > kSkipLimit;
}

}  // namespace

const char* to_string(Metric m) {
    switch (m) {
        case Metric::TV: return "tv";
        case Metric::Wass: return "wass";
        default: return "smooth";
    }
}

std::string bound_csv_header() {
    return "theorem,metric,standardization,n,value,clamped,stderr,epsilon,r,seed";
}

std::string bound_csv_row(const BoundReport& rep) {
    char buf[320];
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%zu,%.12g,%.12g,%.12g,%.12g,%.12g,%llu",
                  rep.theorem.c_str(), to_string(rep.metric),
                  to_string(rep.standardization), rep.n, rep.value, rep.clamped,
                  rep.std_error, rep.epsilon, rep.r,
                  static_cast<unsigned long long>(rep.seed));
    return buf;
}

// ---------------------------------------------------------------------------
// Upsilon kernel
// ---------------------------------------------------------------------------

UpsilonKernel::UpsilonKernel(const PosteriorContext& ctx, const Standardization& s,
                             ThirdSource source, int g)
    : ctx_(&ctx), std_(&s), source_(source), rule_(g), rule_fine_(2 * g),
      k_(ctx.dim()), n_(double(ctx.summary.n)) {
    if (source == ThirdSource::Lambda && ctx.prior.smoothness != Smoothness::C3)
        throw SmoothnessViolation(
            "lambda third derivatives need a C3 prior; use the weak-prior variant");
}

double UpsilonKernel::third(const std::vector<double>& theta, std::size_t l,
                            std::size_t u, std::size_t v) const {
    if (source_ == ThirdSource::Lambda)
        return n_ * ctx_->model.beta_third(theta, l, u, v) +
               ctx_->prior.eta_third(theta, l, u, v);
    return n_ * ctx_->model.beta_third(theta, l, u, v);
}

bool UpsilonKernel::eval_with(const UpsilonRule& rule, const std::vector<double>& w,
                              std::vector<double>& out) const {
    out.assign(k_ * k_ * k_, 0.0);
    const std::vector<double> d = std_->inv_scale.mul(w);
    const std::vector<double>& c = std_->center;
    std::vector<double> theta(k_);
    for (std::size_t node = 0; node < rule.t.size(); ++node) {
        const double t = rule.t[node];
        const double wt = rule.w[node];
        for (std::size_t i = 0; i < k_; ++i) theta[i] = c[i] + t * d[i];
        if (!ctx_->model.param_in_support(theta)) return false;
        for (std::size_t l = 0; l < k_; ++l)
            for (std::size_t u = l; u < k_; ++u)
                for (std::size_t v = u; v < k_; ++v) {
                    const double val = third(theta, l, u, v);
                    if (!std::isfinite(val)) return false;
                    const double add = wt * val;
                    out[idx3(k_, l, u, v)] += add;
                    if (u != v) out[idx3(k_, l, v, u)] += add;
                    if (l != u) {
                        out[idx3(k_, u, l, v)] += add;
                        if (l != v) out[idx3(k_, u, v, l)] += add;
                    }
                    if (l != v && u != v) {
                        out[idx3(k_, v, u, l)] += add;
                        if (l != u) out[idx3(k_, v, l, u)] += add;
                    }
                }
    }
    return true;
}

bool UpsilonKernel::eval_all(const std::vector<double>& w,
                             std::vector<double>& out) const {
    return eval_with(rule_, w, out);
}

double UpsilonKernel::eval(std::size_t l, std::size_t u, std::size_t v,
                           const std::vector<double>& w) const {
    std::vector<double> out;
    if (!eval_with(rule_, w, out))
        throw NonFinite("Upsilon segment left the parameter space", w[0]);
    return out[idx3(k_, l, u, v)];
}

double UpsilonKernel::eval_refined(std::size_t l, std::size_t u, std::size_t v,
                                   const std::vector<double>& w) const {
    std::vector<double> out;
    if (!eval_with(rule_fine_, w, out))
        throw NonFinite("Upsilon segment left the parameter space", w[0]);
    return out[idx3(k_, l, u, v)];
}

// ---------------------------------------------------------------------------
// Delta engine
// ---------------------------------------------------------------------------

DeltaResult delta_triple_sum(const PosteriorContext& ctx, const PosteriorDist& post,
                             const Standardization& s, ThirdSource source,
                             const EngineOptions& opts, const StdRegion& region,
                             const PolynomialSpec* chi) {
    const UpsilonKernel kernel(ctx, s, source, opts.upsilon_nodes);
    const RowSumScalars rs = row_sum_scalars(s.inv_scale);
    const std::size_t k = ctx.dim();

    std::vector<double> ups;
    bool any_skip = false;
    ThetaFn f_main = [&](const std::vector<double>& theta) {
        const std::vector<double> w = s.forward(theta);
        if (region && !region(w)) return 0.0;
        if (!kernel.eval_all(w, ups)) {
            any_skip = true;
            return 0.0;
        }
        double sum = 0.0;
        for (std::size_t l = 0; l < k; ++l) {
            double inner = 0.0;
            for (std::size_t u = 0; u < k; ++u)
                for (std::size_t v = 0; v < k; ++v)
                    inner += rs.r[u] * rs.r[v] *
                             std::abs(w[u] * w[v] * ups[idx3(k, l, u, v)]);
            sum += rs.r_tilde[l] * inner;
        }
        if (chi) sum *= chi_sum(*chi, w);
        return sum;
    };

    ExpectOptions eo = opts.expect;
    ExpectationEstimate num = expect(post, f_main, eo);

    DeltaResult out;
    out.estimate = num;

    if (region) {
        ExpectOptions ep = opts.expect;
        ep.stream = opts.expect.stream + 101;
        ExpectationEstimate prob = expect(
            post,
            [&](const std::vector<double>& theta) {
                return region(s.forward(theta)) ? 1.0 : 0.0;
            },
            ep);
        if (!(prob.value > 1e-12))
            throw EmptyRegion("conditioning region carries no posterior mass");
        out.probability = std::min(1.0, prob.value);
        out.estimate.value = num.value / out.probability;
        out.estimate.std_error = num.std_error / out.probability;
    }

    if (any_skip) {
        // probability mass of points whose Taylor segment exits the support
        std::vector<double> probe(k);
        ExpectOptions es = opts.expect;
        es.stream = opts.expect.stream + 102;
        ExpectationEstimate sk = expect(
            post,
            [&](const std::vector<double>& theta) {
                const std::vector<double> w = s.forward(theta);
                if (region && !region(w)) return 0.0;
                const std::vector<double> d = s.inv_scale.mul(w);
                // cheap walk: support checks only
                for (double t : {1.0, 0.75, 0.5, 0.25, 0.05}) {
                    for (std::size_t i = 0; i < k; ++i)
                        probe[i] = s.center[i] + t * d[i];
                    if (!ctx.model.param_in_support(probe)) return 1.0;
                }
                return 0.0;
            },
            es);
        out.skipped_mass = std::max(0.0, sk.value);
    }
    return out;
}

// ---------------------------------------------------------------------------
// mode-standardized bounds
// ---------------------------------------------------------------------------

std::pair<BoundReport, BoundReport> bound_mode_tv_wass(const PosteriorContext& ctx,
                                                       const PosteriorDist& post,
                                                       const EngineOptions& opts) {
    const AssumptionFlags flags = check_assumptions(ctx, AssumptionSet::Mode);
    if (!flags.mode_ok())
        throw AssumptionFailure("mode-standardized theorem assumptions fail");
    const Standardization s = standardize_mode(ctx);
    const DeltaResult d = delta_triple_sum(ctx, post, s, ThirdSource::Lambda, opts);

    BoundReport tv = make_report("mode-tv", Metric::TV, StdKind::Mode, ctx, opts,
                                 kTvConst * d.estimate.value,
                                 kTvConst * d.estimate.std_error);
    BoundReport wass = make_report("mode-wass", Metric::Wass, StdKind::Mode, ctx,
                                   opts, d.estimate.value, d.estimate.std_error);
    attach_delta_diagnostics(tv, d);
    attach_delta_diagnostics(wass, d);
    return {tv, wass};
}

BoundReport bound_mode_tv_local(const PosteriorContext& ctx,
                                const PosteriorDist& post, const StdRegion& region,
                                const EngineOptions& opts) {
    const AssumptionFlags flags = check_assumptions(ctx, AssumptionSet::Mode);
    if (!(flags.identifiable && flags.mode_unique_interior && flags.hess_lambda_pd))
        throw AssumptionFailure("local mode theorem assumptions fail");
    const Standardization s = standardize_mode(ctx);
    const DeltaResult d =
        delta_triple_sum(ctx, post, s, ThirdSource::Lambda, opts, region);
    const double tail = kTailConst * (1.0 - d.probability);
    BoundReport rep = make_report("mode-tv-local", Metric::TV, StdKind::Mode, ctx,
                                  opts, kTvConst * d.estimate.value + tail,
                                  kTvConst * d.estimate.std_error);
    attach_delta_diagnostics(rep, d);
    return rep;
}

BoundReport bound_mode_tv_corollary(const PosteriorContext& ctx,
                                    const PosteriorDist& post, double epsilon,
                                    double r, const EngineOptions& opts) {
    if (!(epsilon > 0.0) || !(r > 0.0))
        throw ConfigError("corollary bound needs epsilon > 0 and r > 0");
    const AssumptionFlags flags = check_assumptions(ctx, AssumptionSet::Mode);
    if (!(flags.identifiable && flags.mode_unique_interior && flags.hess_lambda_pd))
        throw AssumptionFailure("corollary assumptions fail");
    const Standardization s = standardize_mode(ctx);

    // A_{n,eps} = { w : ||inv_scale w||_2 <= eps }, i.e. ||theta - mode||_2 <= eps
    StdRegion region = [&s, epsilon](const std::vector<double>& w) {
        return two_norm(s.inv_scale.mul(w)) <= epsilon;
    };
    const DeltaResult d =
        delta_triple_sum(ctx, post, s, ThirdSource::Lambda, opts, region);
    if (1.0 - d.probability > 0.5)
        throw PreconditionFail(
            "P[||theta - mode|| > eps] exceeds 1/2; corollary not applicable");

    ExpectOptions eo = opts.expect;
    eo.stream = opts.expect.stream + 103;
    const ExpectationEstimate norm_mom = expect(
        post,
        [&](const std::vector<double>& theta) {
            return std::pow(two_norm(s.forward(theta)), r);
        },
        eo);
    const double op_norm = 1.0 / std::sqrt(ctx.hess_lambda_at_mode().lambda_min);
    const double tail =
        kTailConst * std::pow(op_norm, r) * norm_mom.value / std::pow(epsilon, r);

    BoundReport rep = make_report("mode-tv-eps", Metric::TV, StdKind::Mode, ctx,
                                  opts, kTvConst * d.estimate.value + tail,
                                  kTvConst * d.estimate.std_error);
    rep.epsilon = epsilon;
    rep.r = r;
    attach_delta_diagnostics(rep, d);
    return rep;
}

BoundReport bound_mode_smooth(const PosteriorContext& ctx, const PosteriorDist& post,
                              const PolynomialSpec& p, const EngineOptions& opts) {
    const AssumptionFlags flags = check_assumptions(ctx, AssumptionSet::Mode);
    if (!flags.mode_ok())
        throw AssumptionFailure("smooth-function theorem assumptions fail");
    const Standardization s = standardize_mode(ctx);
    const DeltaResult d =
        delta_triple_sum(ctx, post, s, ThirdSource::Lambda, opts, nullptr, &p);
    BoundReport rep = make_report("mode-smooth", Metric::SmoothH, StdKind::Mode, ctx,
                                  opts, d.estimate.value, d.estimate.std_error);
    attach_delta_diagnostics(rep, d);
    return rep;
}

// ---------------------------------------------------------------------------
// univariate improved bounds (independent integration path)
// ---------------------------------------------------------------------------

namespace {

// Collapsed form of the double integral: int_0^1 (1-t) f(center + t*step) dt.
double upsilon_1d(const std::function<double(double)>& third, double center,
                  double step) {
    return integrate_adaptive(
        [&](double t) { return (1.0 - t) * third(center + t * step); }, 0.0, 1.0,
        nullptr, 1e-12);
}

struct Uni1D {
    double center;     // mode or MLE
    double inv_scale;  // sigma of the standardization
    std::function<double(double)> lambda_third;
};

Uni1D uni_setup(const PosteriorContext& ctx, const Standardization& s) {
    Uni1D u;
    u.center = s.center[0];
    u.inv_scale = s.inv_scale(0, 0);
    const Lambda lam = ctx.lambda();
    u.lambda_third = [lam](double t) {
        return lam.third(std::vector<double>{t}, 0, 0, 0);
    };
    return u;
}

}  // namespace

BoundReport bound_mode_univariate(const PosteriorContext& ctx,
                                  const PosteriorDist& post, UniVariant variant,
                                  double epsilon, const EngineOptions& opts) {
    if (ctx.dim() != 1)
        throw DimensionMismatch("univariate bound requested for k != 1");
    const AssumptionFlags flags = check_assumptions(ctx, AssumptionSet::Mode);
    if (!flags.mode_ok())
        throw AssumptionFailure("univariate mode theorem assumptions fail");
    const Standardization s = standardize_mode(ctx);
    const Uni1D u = uni_setup(ctx, s);
    const double prefactor = u.inv_scale * u.inv_scale * u.inv_scale;

    auto weighted = [&](const std::vector<double>& theta, bool tv_weight) {
        const double w = (theta[0] - u.center) / u.inv_scale;
        const double ups = upsilon_1d(u.lambda_third, u.center, u.inv_scale * w);
        const double weight =
            tv_weight ? std::min(kUniTvWeight * w * w, std::abs(w)) : w * w;
        return weight * std::abs(ups);
    };

    std::string name;
    double value = 0.0, se = 0.0;
    if (variant == UniVariant::Wass) {
        name = "mode-uni-wass";
        ExpectationEstimate e = expect(
            post, [&](const std::vector<double>& t) { return weighted(t, false); },
            opts.expect);
        value = prefactor * e.value;
        se = prefactor * e.std_error;
    } else if (variant == UniVariant::Tv) {
        name = "mode-uni-tv";
        ExpectationEstimate e = expect(
            post, [&](const std::vector<double>& t) { return weighted(t, true); },
            opts.expect);
        value = prefactor * e.value;
        se = prefactor * e.std_error;
    } else {
        if (!(epsilon > 0.0)) throw ConfigError("tv_eps needs epsilon > 0");
        name = "mode-uni-tv-eps";
        StdRegion region = [epsilon](const std::vector<double>& w) {
            return std::abs(w[0]) <= epsilon;
        };
        ConditionalEstimate cond = conditional_expect(
            post, [&](const std::vector<double>& t) { return weighted(t, true); },
            [&](const std::vector<double>& t) {
                return region(std::vector<double>{(t[0] - u.center) / u.inv_scale});
            },
            opts.expect);
        value = prefactor * cond.conditional.value +
                kTailConst * (1.0 - cond.probability);
        se = prefactor * cond.conditional.std_error;
    }

    BoundReport rep = make_report(name, variant == UniVariant::Wass ? Metric::Wass
                                                                    : Metric::TV,
                                  StdKind::Mode, ctx, opts, value, se);
    rep.epsilon = variant == UniVariant::TvEps ? epsilon : 0.0;
    return rep;
}

// ---------------------------------------------------------------------------
// MLE-standardized bounds
// ---------------------------------------------------------------------------

namespace {

// Second term of Delta-hat: sum_l rs~_l |d_l eta(mle)| (1/sqrt(n) absorbed
// into the row sums of the MLE standardization).
double eta_grad_term(const PosteriorContext& ctx, const Standardization& s) {
    const RowSumScalars rs = row_sum_scalars(s.inv_scale);
    const std::vector<double> eg = ctx.prior.eta_grad(ctx.mle());
    double t = 0.0;
    for (std::size_t l = 0; l < rs.r_tilde.size(); ++l)
        t += rs.r_tilde[l] * std::abs(eg[l]);
    return t;
}

// Third term: sum_{u,l,m} rs~_l |(H_eta)_{l,m}| |inv_scale_{m,u}| E|w_u|.
double eta_hess_term(const PosteriorContext& ctx, const Standardization& s,
                     const std::vector<double>& abs_first) {
    const RowSumScalars rs = row_sum_scalars(s.inv_scale);
    const SymMatrix c = ctx.prior.eta_hess(ctx.mle());
    const std::size_t k = c.dim();
    double t = 0.0;
    for (std::size_t u = 0; u < k; ++u)
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t m = 0; m < k; ++m)
                t += rs.r_tilde[l] * std::abs(c(l, m)) *
                     std::abs(s.inv_scale(m, u)) * abs_first[u];
    return t;
}

}  // namespace

std::pair<BoundReport, BoundReport> bound_mle_full(const PosteriorContext& ctx,
                                                   const PosteriorDist& post,
                                                   const EngineOptions& opts) {
    const AssumptionFlags flags = check_assumptions(ctx, AssumptionSet::Mle);
    if (!flags.mle_ok())
        throw AssumptionFailure("MLE-standardized theorem assumptions fail");
    const Standardization s = standardize_mle(ctx);

    const DeltaResult d = delta_triple_sum(ctx, post, s, ThirdSource::Lambda, opts);
    const AbsMoments mom = abs_moments(post, s, opts.expect);
    const double delta_hat = d.estimate.value + eta_grad_term(ctx, s) +
                             eta_hess_term(ctx, s, mom.first);

    BoundReport tv = make_report("mle-tv", Metric::TV, StdKind::Mle, ctx, opts,
                                 kTvConst * delta_hat,
                                 kTvConst * d.estimate.std_error);
    BoundReport wass = make_report("mle-wass", Metric::Wass, StdKind::Mle, ctx, opts,
                                   delta_hat, d.estimate.std_error);
    attach_delta_diagnostics(tv, d);
    attach_delta_diagnostics(wass, d);
    return {tv, wass};
}

BoundReport bound_mle_smooth(const PosteriorContext& ctx, const PosteriorDist& post,
                             const PolynomialSpec& p, const EngineOptions& opts) {
    const AssumptionFlags flags = check_assumptions(ctx, AssumptionSet::Mle);
    if (!flags.mle_ok())
        throw AssumptionFailure("MLE smooth-function assumptions fail");
    const Standardization s = standardize_mle(ctx);
    const std::size_t k = ctx.dim();
    const RowSumScalars rs = row_sum_scalars(s.inv_scale);

    const DeltaResult d =
        delta_triple_sum(ctx, post, s, ThirdSource::Lambda, opts, nullptr, &p);

    // E[chi_m(w_m)] and E[|w_u| chi_m(w_m)]
    std::vector<double> chi_mean(k);
    std::vector<std::vector<double>> abschi(k, std::vector<double>(k));
    for (std::size_t m = 0; m < k; ++m) {
        ExpectOptions eo = opts.expect;
        eo.stream = opts.expect.stream + 200 + m;
        chi_mean[m] = expect(post,
                             [&](const std::vector<double>& theta) {
                                 return chi_single(p, m, s.forward(theta)[m], k);
                             },
                             eo)
                          .value;
        for (std::size_t u = 0; u < k; ++u) {
            eo.stream = opts.expect.stream + 300 + m * k + u;
            abschi[m][u] = expect(post,
                                  [&](const std::vector<double>& theta) {
                                      const std::vector<double> w = s.forward(theta);
                                      return std::abs(w[u]) * chi_single(p, m, w[m], k);
                                  },
                                  eo)
                               .value;
        }
    }

    const std::vector<double> eg = ctx.prior.eta_grad(ctx.mle());
    const SymMatrix c = ctx.prior.eta_hess(ctx.mle());
    double term2 = 0.0;
    for (std::size_t l = 0; l < k; ++l)
        for (std::size_t m = 0; m < k; ++m)
            term2 += rs.r_tilde[l] * std::abs(eg[l]) * chi_mean[m];
    double term3 = 0.0;
    for (std::size_t u = 0; u < k; ++u)
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t m = 0; m < k; ++m)
                term3 += rs.r_tilde[l] * std::abs(c(l, m)) *
                         std::abs(s.inv_scale(m, u)) * abschi[m][u];

    BoundReport rep = make_report("mle-smooth", Metric::SmoothH, StdKind::Mle, ctx,
                                  opts, d.estimate.value + term2 + term3,
                                  d.estimate.std_error);
    attach_delta_diagnostics(rep, d);
    return rep;
}

BoundReport bound_mle_univariate(const PosteriorContext& ctx,
                                 const PosteriorDist& post, UniVariant variant,
                                 const EngineOptions& opts) {
    if (ctx.dim() != 1)
        throw DimensionMismatch("univariate MLE bound requested for k != 1");
    if (variant == UniVariant::TvEps)
        throw ConfigError("tv_eps variant is mode-standardized only");
    const AssumptionFlags flags = check_assumptions(ctx, AssumptionSet::Mle);
    if (!flags.mle_ok())
        throw AssumptionFailure("univariate MLE theorem assumptions fail");
    const Standardization s = standardize_mle(ctx);
    const Uni1D u = uni_setup(ctx, s);  // inv_scale = 1/sqrt(n beta'')

    const double eta1 = ctx.prior.eta_grad(ctx.mle())[0];
    const double eta2 = ctx.prior.eta_hess(ctx.mle())(0, 0);
    const bool tv = variant == UniVariant::Tv;

    ExpectationEstimate e = expect(
        post,
        [&](const std::vector<double>& theta) {
            const double w = (theta[0] - u.center) / u.inv_scale;
            const double ups = upsilon_1d(u.lambda_third, u.center, u.inv_scale * w);
            const double inner = eta1 + eta2 * w * u.inv_scale +
                                 w * w * u.inv_scale * u.inv_scale * ups;
            const double weight =
                tv ? std::min(kUniTvWeight, 1.0 / std::abs(w)) : 1.0;
            return weight * std::abs(inner);
        },
        opts.expect);

    BoundReport rep = make_report(tv ? "mle-uni-tv" : "mle-uni-wass",
                                  tv ? Metric::TV : Metric::Wass, StdKind::Mle, ctx,
                                  opts, u.inv_scale * e.value,
                                  u.inv_scale * e.std_error);
    return rep;
}

std::pair<BoundReport, BoundReport> bound_mle_weak(const PosteriorContext& ctx,
                                                   const PosteriorDist& post,
                                                   const EngineOptions& opts) {
    const AssumptionFlags flags = check_assumptions(ctx, AssumptionSet::WeakPrior);
    if (!flags.weak_prior_ok())
        throw AssumptionFailure("weak-prior theorem assumptions fail");
    const Standardization s = standardize_mle(ctx);
    const RowSumScalars rs = row_sum_scalars(s.inv_scale);
    const std::size_t k = ctx.dim();

    const DeltaResult d =
        delta_triple_sum(ctx, post, s, ThirdSource::LikelihoodPart, opts);

    // sum_l rs~_l |E[d_l eta(theta)]|, with eta_grad_sup substituted when given
    double term2 = 0.0;
    if (ctx.prior.eta_grad_sup) {
        for (std::size_t l = 0; l < k; ++l)
            term2 += rs.r_tilde[l] * *ctx.prior.eta_grad_sup;
    } else {
        for (std::size_t l = 0; l < k; ++l) {
            ExpectOptions eo = opts.expect;
            eo.stream = opts.expect.stream + 400 + l;
            const double mean_grad =
                expect(post,
                       [&](const std::vector<double>& theta) {
                           return ctx.prior.eta_grad(theta)[l];
                       },
                       eo)
                    .value;
            term2 += rs.r_tilde[l] * std::abs(mean_grad);
        }
    }

    const double delta_hh = d.estimate.value + term2;
    BoundReport tv = make_report("mle-weak-tv", Metric::TV, StdKind::Mle, ctx, opts,
                                 kTvConst * delta_hh,
                                 kTvConst * d.estimate.std_error);
    BoundReport wass = make_report("mle-weak-wass", Metric::Wass, StdKind::Mle, ctx,
                                   opts, delta_hh, d.estimate.std_error);
    attach_delta_diagnostics(tv, d);
    attach_delta_diagnostics(wass, d);
    return {tv, wass};
}

// ---------------------------------------------------------------------------
// experimental: mode standardization with twice-differentiable eta
// ---------------------------------------------------------------------------

std::pair<BoundReport, BoundReport> bound_mode_experimental(
    const PosteriorContext& ctx, const PosteriorDist& post,
    const EngineOptions& opts) {
    if (!opts.experimental)
        throw ConfigError("experimental bound requires the experimental flag");
    if (ctx.prior.smoothness == Smoothness::C1)
        throw SmoothnessViolation("experimental mode bound needs a C2 prior");
    const Standardization s = standardize_mode(ctx);
    const RowSumScalars rs = row_sum_scalars(s.inv_scale);
    const std::size_t k = ctx.dim();

    const DeltaResult d =
        delta_triple_sum(ctx, post, s, ThirdSource::LikelihoodPart, opts);

    // sum_{l,u} rs~_l rs_u E| w_u * int_0^1 (d_{l,u} eta)(center + y d) dy |
    const GaussLegendre gl(opts.upsilon_nodes);
    ThetaFn f_eta = [&](const std::vector<double>& theta) {
        const std::vector<double> w = s.forward(theta);
        const std::vector<double> dvec = s.inv_scale.mul(w);
        std::vector<double> acc(k * k, 0.0);
        std::vector<double> point(k);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double y = 0.5 * (1.0 + gl.nodes[i]);
            const double wt = 0.5 * gl.weights[i];
            for (std::size_t j = 0; j < k; ++j)
                point[j] = s.center[j] + y * dvec[j];
            if (!ctx.model.param_in_support(point)) return 0.0;
            const SymMatrix he = ctx.prior.eta_hess(point);
            for (std::size_t l = 0; l < k; ++l)
                for (std::size_t u = 0; u < k; ++u) acc[l * k + u] += wt * he(l, u);
        }
        double sum = 0.0;
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t u = 0; u < k; ++u)
                sum += rs.r_tilde[l] * rs.r[u] * std::abs(w[u] * acc[l * k + u]);
        return sum;
    };
    ExpectOptions eo = opts.expect;
    eo.stream = opts.expect.stream + 500;
    const ExpectationEstimate t2 = expect(post, f_eta, eo);

    const std::vector<double> eg = ctx.prior.eta_grad(ctx.mode());
    double t3 = 0.0;
    for (std::size_t l = 0; l < k; ++l) t3 += rs.r_tilde[l] * std::abs(eg[l]);

    const double total = d.estimate.value + t2.value + t3;
    BoundReport tv = make_report("mode-exp-tv", Metric::TV, StdKind::Mode, ctx, opts,
                                 kTvConst * total, kTvConst * d.estimate.std_error);
    BoundReport wass = make_report("mode-exp-wass", Metric::Wass, StdKind::Mode, ctx,
                                   opts, total, d.estimate.std_error);
    attach_delta_diagnostics(tv, d);
    attach_delta_diagnostics(wass, d);
    return {tv, wass};
}

// ---------------------------------------------------------------------------
// lower bound and Stein diagnostic
// ---------------------------------------------------------------------------

double wass_lower_bound(const PosteriorContext& ctx, const PosteriorDist& post,
                        const Standardization& s, const EngineOptions& opts) {
    const std::size_t k = ctx.dim();
    std::vector<double> mean(k);
    for (std::size_t u = 0; u < k; ++u) {
        ExpectOptions eo = opts.expect;
        eo.stream = opts.expect.stream + 600 + u;
        mean[u] = expect(post,
                         [&](const std::vector<double>& theta) { return theta[u]; },
                         eo)
                      .value;
    }
    return two_norm(s.forward(mean));
}

ExpectationEstimate stein_residual(const PosteriorContext& ctx,
                                   const PosteriorDist& post,
                                   const Standardization& s, const SteinTestFn& f,
                                   std::size_t samples, std::uint64_t seed) {
    if (!post.can_sample())
        throw Error("Stein residual diagnostic needs an exact sampler");
    const Lambda lam = ctx.lambda();
    CounterRng rng(seed, 7);
    std::vector<double> theta;
    double mean = 0.0, m2 = 0.0;
    const std::size_t k = ctx.dim();
    for (std::size_t i = 1; i <= samples; ++i) {
        post.sample(rng, theta);
        const std::vector<double> w = s.forward(theta);
        const std::vector<double> score = lam.grad(theta);
        std::vector<double> drift(k);
        for (std::size_t u = 0; u < k; ++u) drift[u] = ctx.summary.t[u] - score[u];
        const std::vector<double> coeff = s.inv_scale.mul(drift);
        const std::vector<double> fg = f.grad(w);
        const double val = f.laplacian(w) + dot(coeff, fg);
        const double delta = val - mean;
        mean += delta / double(i);
        m2 += delta * (val - mean);
    }
    const double var = m2 / double(samples - 1);
    return {mean, std::sqrt(var / double(samples)), "mc", samples, 0.0};
}

}  // namespace bvm
