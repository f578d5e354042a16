#include "bvm/posterior.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

#include "bvm/quadrature.hpp"
#include "bvm/vec.hpp"

namespace bvm {

namespace {

constexpr double kTail = 1e-14;
const double kInf = std::numeric_limits<double>::infinity();

double logit(double p) { return std::log(p) - std::log1p(-p); }

double log1p_exp(double t) {
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double gamma_quantile(double shape, double rate, double p) {
    return boost::math::gamma_p_inv(shape, p) / rate;
}

double beta_quantile(double a, double b, double p) {
    return boost::math::ibeta_inv(a, b, p);
}

// ---- gamma in natural space -------------------------------------------------

class GammaPosterior final : public PosteriorDist {
public:
    GammaPosterior(double shape, double rate) : shape_(shape), rate_(rate) {
        if (!(shape > 0.0) || !(rate > 0.0))
            throw HyperparameterOutOfRange("gamma posterior needs shape, rate > 0");
        lo_ = gamma_quantile(shape_, rate_, kTail);
        hi_ = gamma_quantile(shape_, rate_, 1.0 - kTail);
        const double sd = std::sqrt(shape_) / rate_;
        lo_ = std::max(lo_ - 4.0 * sd, lo_ * 0.25);
        hi_ += 4.0 * sd;
        log_norm_ = shape_ * std::log(rate_) - std::lgamma(shape_);
    }
    std::size_t dim() const override { return 1; }
    std::string family() const override { return "gamma"; }
    double log_pdf(const std::vector<double>& t) const override {
        if (t[0] <= 0.0) return -kInf;
        return log_norm_ + (shape_ - 1.0) * std::log(t[0]) - rate_ * t[0];
    }
    double cdf(double t) const override {
        if (t <= 0.0) return 0.0;
        return boost::math::gamma_p(shape_, rate_ * t);
    }
    std::array<double, 2> support1d() const override { return {0.0, kInf}; }
    std::vector<std::array<double, 2>> window() const override {
        return {{lo_, hi_}};
    }
    bool can_sample() const override { return true; }
    void sample(CounterRng& rng, std::vector<double>& out) const override {
        out.assign(1, rng.gamma(shape_, rate_));
    }

private:
    double shape_, rate_, lo_, hi_, log_norm_;
};

// ---- theta = log(Gamma) (Poisson natural parameter) -------------------------

class LogGammaPosterior final : public PosteriorDist {
public:
    LogGammaPosterior(double shape, double rate) : shape_(shape), rate_(rate) {
        if (!(shape > 0.0) || !(rate > 0.0))
            throw HyperparameterOutOfRange("log-gamma posterior needs shape, rate > 0");
        lo_ = std::log(gamma_quantile(shape_, rate_, kTail));
        hi_ = std::log(gamma_quantile(shape_, rate_, 1.0 - kTail));
        const double pad = 4.0 / std::sqrt(shape_);
        lo_ -= pad;
        hi_ += pad;
        log_norm_ = shape_ * std::log(rate_) - std::lgamma(shape_);
    }
    std::size_t dim() const override { return 1; }
    std::string family() const override { return "log-gamma"; }
    double log_pdf(const std::vector<double>& t) const override {
        return log_norm_ + shape_ * t[0] - rate_ * std::exp(t[0]);
    }
    double cdf(double t) const override {
        return boost::math::gamma_p(shape_, rate_ * std::exp(t));
    }
    std::array<double, 2> support1d() const override { return {-kInf, kInf}; }
    std::vector<std::array<double, 2>> window() const override {
        return {{lo_, hi_}};
    }
    bool can_sample() const override { return true; }
    void sample(CounterRng& rng, std::vector<double>& out) const override {
        out.assign(1, std::log(rng.gamma(shape_, rate_)));
    }

private:
    double shape_, rate_, lo_, hi_, log_norm_;
};

// ---- theta = logit(Beta) (Bernoulli natural parameter) ----------------------

class LogitBetaPosterior final : public PosteriorDist {
public:
    LogitBetaPosterior(double a, double b) : a_(a), b_(b) {
        if (!(a > 0.0) || !(b > 0.0))
            throw HyperparameterOutOfRange("logit-beta posterior needs a, b > 0");
        lo_ = logit(beta_quantile(a_, b_, kTail)) - 2.0;
        hi_ = logit(beta_quantile(a_, b_, 1.0 - kTail)) + 2.0;
        log_norm_ = -(std::lgamma(a_) + std::lgamma(b_) - std::lgamma(a_ + b_));
    }
    std::size_t dim() const override { return 1; }
    std::string family() const override { return "logit-beta"; }
    double log_pdf(const std::vector<double>& t) const override {
        return log_norm_ + a_ * t[0] - (a_ + b_) * log1p_exp(t[0]);
    }
    double cdf(double t) const override {
        const double p = 1.0 / (1.0 + std::exp(-t));
        return boost::math::ibeta(a_, b_, p);
    }
    std::array<double, 2> support1d() const override { return {-kInf, kInf}; }
    std::vector<std::array<double, 2>> window() const override {
        return {{lo_, hi_}};
    }
    bool can_sample() const override { return true; }
    void sample(CounterRng& rng, std::vector<double>& out) const override {
        out.assign(1, logit(rng.beta(a_, b_)));
    }

private:
    double a_, b_, lo_, hi_, log_norm_;
};

// ---- theta = log(Beta) (negative binomial natural parameter) ----------------

class LogBetaPosterior final : public PosteriorDist {
public:
    LogBetaPosterior(double a, double b) : a_(a), b_(b) {
        if (!(a > 0.0) || !(b > 0.0))
            throw HyperparameterOutOfRange("log-beta posterior needs a, b > 0");
        lo_ = std::log(beta_quantile(a_, b_, kTail)) - 2.0;
        // pad halfway toward the support edge at 0
        hi_ = 0.5 * std::log(beta_quantile(a_, b_, 1.0 - kTail));
        log_norm_ = -(std::lgamma(a_) + std::lgamma(b_) - std::lgamma(a_ + b_));
    }
    std::size_t dim() const override { return 1; }
    std::string family() const override { return "log-beta"; }
    double log_pdf(const std::vector<double>& t) const override {
        if (t[0] >= 0.0) return -kInf;
        return log_norm_ + a_ * t[0] + (b_ - 1.0) * std::log1p(-std::exp(t[0]));
    }
    double cdf(double t) const override {
        if (t >= 0.0) return 1.0;
        return boost::math::ibeta(a_, b_, std::exp(t));
    }
    std::array<double, 2> support1d() const override { return {-kInf, 0.0}; }
    std::vector<std::array<double, 2>> window() const override {
        return {{lo_, hi_}};
    }
    bool can_sample() const override { return true; }
    void sample(CounterRng& rng, std::vector<double>& out) const override {
        out.assign(1, std::log(rng.beta(a_, b_)));
    }

private:
    double a_, b_, lo_, hi_, log_norm_;
};

// ---- theta_u = log(p_u / p_k), p ~ Dirichlet(alpha) --------------------------

class LogisticDirichletPosterior final : public PosteriorDist {
public:
    explicit LogisticDirichletPosterior(std::vector<double> alpha)
        : alpha_(std::move(alpha)) {
        if (alpha_.size() < 2)
            throw HyperparameterOutOfRange("dirichlet posterior needs >= 2 weights");
        alpha0_ = 0.0;
        for (double a : alpha_) {
            if (!(a > 0.0))
                throw HyperparameterOutOfRange("dirichlet weights must be positive");
            alpha0_ += a;
        }
        log_norm_ = std::lgamma(alpha0_);
        for (double a : alpha_) log_norm_ -= std::lgamma(a);
        const double ak = alpha_.back();
        for (std::size_t u = 0; u + 1 < alpha_.size(); ++u) {
            // marginal of theta_u is logit of Beta(alpha_u, alpha_k)
            const double lo = logit(beta_quantile(alpha_[u], ak, kTail)) - 2.0;
            const double hi = logit(beta_quantile(alpha_[u], ak, 1.0 - kTail)) + 2.0;
            box_.push_back({lo, hi});
        }
    }
    std::size_t dim() const override { return alpha_.size() - 1; }
    std::string family() const override { return "logistic-dirichlet"; }
    double log_pdf(const std::vector<double>& t) const override {
        double m = 0.0;
        for (double v : t) m = std::max(m, v);
        double denom = std::exp(-m);
        for (double v : t) denom += std::exp(v - m);
        const double log_denom = m + std::log(denom);
        double s = log_norm_ - alpha0_ * log_denom;
        for (std::size_t u = 0; u < t.size(); ++u) s += alpha_[u] * t[u];
        return s;
    }
    std::vector<std::array<double, 2>> window() const override { return box_; }
    bool can_sample() const override { return true; }
    void sample(CounterRng& rng, std::vector<double>& out) const override {
        rng.dirichlet(alpha_, p_buf_);
        out.resize(alpha_.size() - 1);
        const double lk = std::log(p_buf_.back());
        for (std::size_t u = 0; u + 1 < alpha_.size(); ++u)
            out[u] = std::log(p_buf_[u]) - lk;
    }

private:
    std::vector<double> alpha_;
    double alpha0_, log_norm_;
    std::vector<std::array<double, 2>> box_;
    mutable std::vector<double> p_buf_;
};

// ---- natural-parameter normal-gamma ------------------------------------------

class NormalGammaPosterior final : public PosteriorDist {
public:
    NormalGammaPosterior(double A, double B, double c, double d)
        : A_(A), B_(B), c_(c), d_(d) {
        shape_ = d + 1.5;
        rate_ = B - A * A / (4.0 * c);
        mu0_ = A / (2.0 * c);
        if (!(c > 0.0) || !(shape_ > 0.0) || !(rate_ > 0.0))
            throw HyperparameterOutOfRange(
                "normal-gamma posterior parameters violate positivity");
        log_norm_ = -(0.5 * std::log(M_PI / c_) + std::lgamma(shape_) -
                      shape_ * std::log(rate_));
        const double w_lo = gamma_quantile(shape_, rate_, kTail) * 0.5;
        const double w_hi = gamma_quantile(shape_, rate_, 1.0 - kTail) * 1.3;
        const double mu_half = 9.0 / std::sqrt(2.0 * c_ * w_lo);
        const double m_lo = mu0_ - mu_half, m_hi = mu0_ + mu_half;
        double t1_lo = std::min(std::min(m_lo * w_lo, m_lo * w_hi),
                                std::min(m_hi * w_lo, m_hi * w_hi));
        double t1_hi = std::max(std::max(m_lo * w_lo, m_lo * w_hi),
                                std::max(m_hi * w_lo, m_hi * w_hi));
        box_ = {{t1_lo, t1_hi}, {w_lo, w_hi}};
    }
    std::size_t dim() const override { return 2; }
    std::string family() const override { return "normal-gamma"; }
    double log_pdf(const std::vector<double>& t) const override {
        if (t[1] <= 0.0) return -kInf;
        return log_norm_ + t[0] * A_ - t[1] * B_ - c_ * t[0] * t[0] / t[1] +
               d_ * std::log(t[1]);
    }
    std::vector<std::array<double, 2>> window() const override { return box_; }
    bool can_sample() const override { return true; }
    void sample(CounterRng& rng, std::vector<double>& out) const override {
        const double w = rng.gamma(shape_, rate_);
        const double mu = mu0_ + rng.normal() / std::sqrt(2.0 * c_ * w);
        out.assign({mu * w, w});
    }

private:
    double A_, B_, c_, d_, shape_, rate_, mu0_, log_norm_;
    std::vector<std::array<double, 2>> box_;
};

// ---- numeric fallback --------------------------------------------------------

class NumericPosterior final : public PosteriorDist {
public:
    explicit NumericPosterior(const PosteriorContext& ctx)
        : lambda_(ctx.lambda()), t_(ctx.summary.t) {
        const std::size_t k = ctx.dim();
        if (k > 2) throw Error("numeric posterior limited to dim <= 2");
        // Window around whichever center is available: the mode with the
        // H_lambda scale, or (C1 priors) the MLE with the sqrt(n) H_beta scale.
        const bool have_mode = ctx.mode_opt.has_value();
        const std::vector<double>& center = have_mode ? ctx.mode() : ctx.mle();
        const SpdFactorization& h =
            have_mode ? ctx.hess_lambda_at_mode() : ctx.hess_beta_at_mle();
        const double shrink =
            have_mode ? 1.0 : 1.0 / std::sqrt(double(ctx.summary.n));
        shift_ = dot(center, t_) - lambda_.value(center);
        for (std::size_t i = 0; i < k; ++i) {
            double sigma = 0.0;
            for (std::size_t j = 0; j < k; ++j)
                sigma += h.inv_sqrt(i, j) * h.inv_sqrt(i, j);
            sigma = std::sqrt(sigma) * shrink;
            double lo = center[i] - 14.0 * sigma;
            double hi = center[i] + 14.0 * sigma;
            // bisect toward the center until inside the (axis-aligned) support
            std::vector<double> probe = center;
            for (int it = 0; it < 80; ++it) {
                probe[i] = lo;
                if (ctx.model.param_in_support(probe)) break;
                lo = 0.5 * (lo + center[i]);
            }
            for (int it = 0; it < 80; ++it) {
                probe[i] = hi;
                if (ctx.model.param_in_support(probe)) break;
                hi = 0.5 * (hi + center[i]);
            }
            box_.push_back({lo, hi});
        }
        log_z_ = std::log(integral());
    }
    std::size_t dim() const override { return box_.size(); }
    std::string family() const override { return "numeric"; }
    double log_pdf(const std::vector<double>& theta) const override {
        if (!lambda_.model().param_in_support(theta)) return -kInf;
        return dot(theta, t_) - lambda_.value(theta) - shift_ - log_z_;
    }
    std::vector<std::array<double, 2>> window() const override { return box_; }

private:
    double unnorm(const std::vector<double>& theta) const {
        return std::exp(dot(theta, t_) - lambda_.value(theta) - shift_);
    }
    double integral() const;

    Lambda lambda_;
    std::vector<double> t_;
    std::vector<std::array<double, 2>> box_;
    double shift_ = 0.0, log_z_ = 0.0;
};

// Composite Gauss-Legendre tensor grid used by the 2-D expectation path.
struct Tensor2D {
    std::vector<double> x, wx, y, wy;

    Tensor2D(const std::array<double, 2>& bx, const std::array<double, 2>& by,
             int nodes_per_axis) {
        const int g = 10;
        const int panels = std::max(2, std::min(nodes_per_axis, 200) / g);
        const GaussLegendre gl(g);
        fill(bx, panels, gl, x, wx);
        fill(by, panels, gl, y, wy);
    }

    static void fill(const std::array<double, 2>& b, int panels,
                     const GaussLegendre& gl, std::vector<double>& nodes,
                     std::vector<double>& weights) {
        const double h = (b[1] - b[0]) / panels;
        for (int p = 0; p < panels; ++p) {
            const double a = b[0] + p * h;
            for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
                nodes.push_back(a + 0.5 * h * (1.0 + gl.nodes[i]));
                weights.push_back(0.5 * h * gl.weights[i]);
            }
        }
    }
};

double NumericPosterior::integral() const {
    if (box_.size() == 1) {
        return integrate_adaptive(
            [&](double t) { return unnorm({t}); }, box_[0][0], box_[0][1], nullptr,
            1e-12);
    }
    Tensor2D grid(box_[0], box_[1], 160);
    double s = 0.0;
    std::vector<double> theta(2);
    for (std::size_t i = 0; i < grid.x.size(); ++i) {
        theta[0] = grid.x[i];
        for (std::size_t j = 0; j < grid.y.size(); ++j) {
            theta[1] = grid.y[j];
            s += grid.wx[i] * grid.wy[j] * unnorm(theta);
        }
    }
    return s;
}

}  // namespace

std::unique_ptr<PosteriorDist> make_gamma_posterior(double shape, double rate) {
    return std::make_unique<GammaPosterior>(shape, rate);
}
std::unique_ptr<PosteriorDist> make_log_gamma_posterior(double shape, double rate) {
    return std::make_unique<LogGammaPosterior>(shape, rate);
}
std::unique_ptr<PosteriorDist> make_logit_beta_posterior(double a, double b) {
    return std::make_unique<LogitBetaPosterior>(a, b);
}
std::unique_ptr<PosteriorDist> make_log_beta_posterior(double a, double b) {
    return std::make_unique<LogBetaPosterior>(a, b);
}
std::unique_ptr<PosteriorDist> make_logistic_dirichlet_posterior(
    std::vector<double> alpha) {
    return std::make_unique<LogisticDirichletPosterior>(std::move(alpha));
}
std::unique_ptr<PosteriorDist> make_normal_gamma_posterior(double A, double B,
                                                           double c, double d) {
    return std::make_unique<NormalGammaPosterior>(A, B, c, d);
}
std::unique_ptr<PosteriorDist> make_numeric_posterior(const PosteriorContext& ctx) {
    return std::make_unique<NumericPosterior>(ctx);
}

// ---------------------------------------------------------------------------
// expectation engine
// ---------------------------------------------------------------------------

namespace {

ExpectationEstimate expect_quad_1d(const PosteriorDist& post, const ThetaFn& f,
                                   const ExpectOptions& opts) {
    const auto box = post.window()[0];
    std::vector<double> theta(1);
    double err = 0.0;
    std::size_t evals = 0;
    const double v = integrate_adaptive(
        [&](double t) {
            theta[0] = t;
            const double p = post.pdf(theta);
            if (p == 0.0) return 0.0;
            const double y = f(theta);
            if (!std::isfinite(y)) throw NonFinite("1-D posterior expectation", t);
            ++evals;
            return y * p;
        },
        box[0], box[1], &err, opts.rel_tol);
    return {v, 0.0, "quad1d", evals, err};
}

ExpectationEstimate expect_quad_2d(const PosteriorDist& post, const ThetaFn& f,
                                   const ExpectOptions& opts) {
    const auto box = post.window();
    auto pass = [&](int nodes) {
        Tensor2D grid(box[0], box[1], nodes);
        double s = 0.0;
        std::vector<double> theta(2);
        for (std::size_t i = 0; i < grid.x.size(); ++i) {
            theta[0] = grid.x[i];
            for (std::size_t j = 0; j < grid.y.size(); ++j) {
                theta[1] = grid.y[j];
                const double p = post.pdf(theta);
                if (p == 0.0) continue;
                const double y = f(theta);
                if (!std::isfinite(y))
                    throw NonFinite("2-D posterior expectation", theta[0]);
                s += grid.wx[i] * grid.wy[j] * y * p;
            }
        }
        return s;
    };
    const int n = std::min(opts.nodes_per_axis, 200);
    const double coarse = pass(n / 2);
    const double fine = pass(n);
    return {fine, 0.0, "quad2d", std::size_t(n) * std::size_t(n),
            std::abs(fine - coarse)};
}

ExpectationEstimate expect_mc(const PosteriorDist& post, const ThetaFn& f,
                              const ExpectOptions& opts) {
    CounterRng rng(opts.seed, opts.stream);
    std::vector<double> theta;
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 1; i <= opts.mc_samples; ++i) {
        post.sample(rng, theta);
        const double y = f(theta);
        if (!std::isfinite(y))
            throw NonFinite("Monte Carlo posterior expectation", theta[0]);
        const double delta = y - mean;
        mean += delta / double(i);
        m2 += delta * (y - mean);
    }
    const double var = m2 / double(opts.mc_samples - 1);
    return {mean, std::sqrt(var / double(opts.mc_samples)), "mc",
            opts.mc_samples, 0.0};
}

bool use_quadrature(const PosteriorDist& post, const ExpectOptions& opts) {
    switch (opts.method) {
        case ExpectOptions::Method::Quadrature: return true;
        case ExpectOptions::Method::MonteCarlo: return false;
        default: return post.dim() <= 2;
    }
}

}  // namespace

ExpectationEstimate expect(const PosteriorDist& post, const ThetaFn& f,
                           const ExpectOptions& opts) {
    if (use_quadrature(post, opts)) {
        if (post.dim() == 1) return expect_quad_1d(post, f, opts);
        if (post.dim() == 2) return expect_quad_2d(post, f, opts);
        throw Error("quadrature expectation limited to dim <= 2");
    }
    return expect_mc(post, f, opts);
}

ConditionalEstimate conditional_expect(const PosteriorDist& post, const ThetaFn& f,
                                       const ThetaPredicate& region,
                                       const ExpectOptions& opts) {
    if (use_quadrature(post, opts)) {
        ThetaFn masked_f = [&](const std::vector<double>& t) {
            return region(t) ? f(t) : 0.0;
        };
        ThetaFn masked_one = [&](const std::vector<double>& t) {
            return region(t) ? 1.0 : 0.0;
        };
        ExpectationEstimate num = expect(post, masked_f, opts);
        ExpectationEstimate den = expect(post, masked_one, opts);
        if (!(den.value > 1e-12))
            throw EmptyRegion("no posterior mass in the conditioning region");
        ExpectationEstimate out = num;
        out.value = num.value / den.value;
        out.refine_diff = num.refine_diff + std::abs(num.value) * den.refine_diff;
        return {out, den.value};
    }
    CounterRng rng(opts.seed, opts.stream);
    std::vector<double> theta;
    double mean = 0.0, m2 = 0.0;
    std::size_t inside = 0;
    for (std::size_t i = 0; i < opts.mc_samples; ++i) {
        post.sample(rng, theta);
        if (!region(theta)) continue;
        ++inside;
        const double y = f(theta);
        const double delta = y - mean;
        mean += delta / double(inside);
        m2 += delta * (y - mean);
    }
    if (inside == 0) throw EmptyRegion("no samples fell in the region");
    const double se =
        inside > 1 ? std::sqrt(m2 / double(inside - 1) / double(inside)) : 0.0;
    return {{mean, se, "mc", inside, 0.0},
            double(inside) / double(opts.mc_samples)};
}

Pushforward1D pushforward_1d(const PosteriorDist& post, const Standardization& s) {
    if (post.dim() != 1)
        throw DimensionMismatch("1-D pushforward of a multivariate posterior");
    return Pushforward1D{&post, s.center[0], s.inv_scale(0, 0)};
}

AbsMoments abs_moments(const PosteriorDist& post, const Standardization& s,
                       const ExpectOptions& opts) {
    const std::size_t k = post.dim();
    AbsMoments out;
    out.first.resize(k);
    out.second.resize(k);
    out.first_se.resize(k);
    out.second_se.resize(k);
    for (std::size_t u = 0; u < k; ++u) {
        ExpectOptions o = opts;
        o.stream = opts.stream + 2 * u;
        ExpectationEstimate m1 = expect(
            post,
            [&](const std::vector<double>& t) { return std::abs(s.forward(t)[u]); },
            o);
        o.stream = opts.stream + 2 * u + 1;
        ExpectationEstimate m2 = expect(
            post,
            [&](const std::vector<double>& t) {
                const double w = s.forward(t)[u];
                return w * w;
            },
            o);
        out.first[u] = m1.value;
        out.second[u] = m2.value;
        out.first_se[u] = m1.std_error;
        out.second_se[u] = m2.std_error;
    }
    return out;
}

}  // namespace bvm
