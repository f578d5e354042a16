#include "bvm/examples.hpp"

#include <cmath>

#include "bvm/stats.hpp"
#include "bvm/vec.hpp"

namespace bvm {

namespace {

const double kTailConst = 0.5 * (3.0 + std::sqrt(5.0));
const double kUniTvWeight = std::sqrt(M_PI / 8.0);
const double kInvTwelveSqrt3 = 1.0 / (12.0 * std::sqrt(3.0));

double tau_at(const std::vector<double>& tau, std::size_t i) {
    if (i >= tau.size()) throw HyperparameterOutOfRange("missing tau component");
    return tau[i];
}

}  // namespace

ExampleSpec::ExampleSpec(ExampleConfig cfg) : cfg_(std::move(cfg)) {
    model_prior();  // validate hyperparameters eagerly
    switch (cfg_.family) {
        case Family::Bernoulli:
        case Family::BernoulliHyperbolic:
        case Family::NegBin: {
            if (!cfg_.data_params.empty()) {
                const double p = cfg_.data_params[0];
                if (!(p > 0.0 && p < 1.0))
                    throw ConfigError("success probability must lie in (0,1)");
            }
            break;
        }
        case Family::Poisson:
            if (!cfg_.data_params.empty() && !(cfg_.data_params[0] > 0.0))
                throw ConfigError("poisson mean must be positive");
            break;
        case Family::NormalPrecision:
        case Family::Weibull:
            if (!cfg_.data_params.empty() && !(cfg_.data_params[0] > 0.0))
                throw ConfigError("scale parameter must be positive");
            break;
        case Family::Multinomial: {
            double s = 0.0;
            for (double p : cfg_.data_params) {
                if (!(p > 0.0 && p < 1.0))
                    throw ConfigError("category probabilities must lie in (0,1)");
                s += p;
            }
            if (!(s < 1.0))
                throw ConfigError("category probabilities must sum below 1");
            break;
        }
        case Family::NormalMeanVar:
            if (cfg_.data_params.size() >= 2 && !(cfg_.data_params[1] > 0.0))
                throw ConfigError("variance must be positive");
            break;
    }
}

std::string ExampleSpec::key() const {
    switch (cfg_.family) {
        case Family::Bernoulli: return "bernoulli-beta";
        case Family::BernoulliHyperbolic: return "bernoulli-hyperbolic";
        case Family::Poisson: return "poisson-gamma";
        case Family::NormalPrecision: return "normal-precision-gamma";
        case Family::Weibull: return "weibull-gamma";
        case Family::NegBin: return "negbin-conjugate";
        case Family::Multinomial: return "multinomial-dirichlet";
        default: return "normal-meanvar-conjugate";
    }
}

std::size_t ExampleSpec::dim() const {
    switch (cfg_.family) {
        case Family::Multinomial: return cfg_.tau.size() - 1;
        case Family::NormalMeanVar: return 2;
        default: return 1;
    }
}

ModelPrior ExampleSpec::model_prior() const {
    const auto& tau = cfg_.tau;
    switch (cfg_.family) {
        case Family::Bernoulli:
            return {model_bernoulli(),
                    prior_bernoulli_conjugate(tau_at(tau, 0), tau_at(tau, 1))};
        case Family::BernoulliHyperbolic:
            return {model_bernoulli(), prior_bernoulli_hyperbolic()};
        case Family::Poisson:
            return {model_poisson(), prior_poisson_gamma(tau_at(tau, 0), tau_at(tau, 1))};
        case Family::NormalPrecision:
            return {model_normal_precision(cfg_.fixed.empty() ? 0.0 : cfg_.fixed[0]),
                    prior_gamma_exponent(tau_at(tau, 0), tau_at(tau, 1))};
        case Family::Weibull:
            return {model_weibull(cfg_.fixed.empty() ? 1.0 : cfg_.fixed[0]),
                    prior_gamma_exponent(tau_at(tau, 0), tau_at(tau, 1))};
        case Family::NegBin:
            return {model_negbin(cfg_.fixed.empty() ? 1.0 : cfg_.fixed[0]),
                    prior_negbin_conjugate(tau_at(tau, 0), tau_at(tau, 1))};
        case Family::Multinomial:
            return {model_multinomial(cfg_.tau.size()), prior_dirichlet(cfg_.tau)};
        default:
            return {model_normal_meanvar(),
                    prior_normal_gamma(tau_at(tau, 0), tau_at(tau, 1),
                                       tau_at(tau, 2), tau_at(tau, 3))};
    }
}

// ---------------------------------------------------------------------------
// closed-form centers
// ---------------------------------------------------------------------------

std::vector<double> ExampleSpec::closed_form_mode(const DataSummary& s) const {
    const auto& tau = cfg_.tau;
    const double n = double(s.n);
    switch (cfg_.family) {
        case Family::Bernoulli: {
            const double t = s.t[0];
            return {std::log((tau[0] + t) / (n - t + tau[1] - tau[0]))};
        }
        case Family::BernoulliHyperbolic:
            throw AssumptionFailure("no closed-form mode for the hyperbolic prior");
        case Family::Poisson:
            return {std::log((tau[0] + s.t[0]) / (n + tau[1]))};
        case Family::NormalPrecision: {
            const double ns2 = -2.0 * s.t[0];
            return {(n + 2.0 * tau[1]) / (ns2 + 2.0 * tau[0])};
        }
        case Family::Weibull: {
            const double sxm = -s.t[0];
            return {(n + tau[1]) / (sxm + tau[0])};
        }
        case Family::NegBin: {
            const double r = cfg_.fixed[0];
            const double a = s.t[0] + tau[0];
            return {std::log(a / (a + tau[1] + n * r))};
        }
        case Family::Multinomial: {
            const std::size_t k = tau.size();
            double head = 0.0, count_head = 0.0;
            for (std::size_t j = 0; j + 1 < k; ++j) {
                head += tau[j];
                count_head += s.t[j];
            }
            const double denom = n - count_head + tau[k - 1] - head;
            std::vector<double> mode(k - 1);
            for (std::size_t u = 0; u + 1 < k; ++u)
                mode[u] = std::log((s.t[u] + tau[u]) / denom);
            return mode;
        }
        default: {
            const double sx = s.t[0];
            const double sxx = -2.0 * s.t[1];
            const double a1 = n + 2.0 * tau[0], a2 = n + 2.0 * tau[1];
            const double den =
                a2 * (sxx + 2.0 * tau[3]) - (sx + tau[2]) * (sx + tau[2]);
            return {a1 * (sx + tau[2]) / den, a1 * a2 / den};
        }
    }
}

std::vector<double> ExampleSpec::closed_form_mle(const DataSummary& s) const {
    const double n = double(s.n);
    switch (cfg_.family) {
        case Family::Bernoulli:
        case Family::BernoulliHyperbolic: {
            const double xbar = s.t[0] / n;
            return {std::log(xbar / (1.0 - xbar))};
        }
        case Family::Poisson:
            return {std::log(s.t[0] / n)};
        case Family::NormalPrecision:
            return {n / (-2.0 * s.t[0])};
        case Family::Weibull:
            return {n / (-s.t[0])};
        case Family::NegBin: {
            const double r = cfg_.fixed[0];
            const double xbar = s.t[0] / n;
            return {std::log(xbar / (r + xbar))};
        }
        case Family::Multinomial: {
            const std::size_t km1 = cfg_.tau.size() - 1;
            double count_head = 0.0;
            for (std::size_t j = 0; j < km1; ++j) count_head += s.t[j];
            const double ck = n - count_head;
            std::vector<double> mle(km1);
            for (std::size_t u = 0; u < km1; ++u) mle[u] = std::log(s.t[u] / ck);
            return mle;
        }
        default: {
            const double xbar = s.t[0] / n;
            const double x2bar = -2.0 * s.t[1] / n;
            const double var = x2bar - xbar * xbar;
            return {xbar / var, 1.0 / var};
        }
    }
}

Standardization ExampleSpec::closed_standardization(const DataSummary& s,
                                                    StdKind kind) const {
    const ModelPrior mp = model_prior();
    const double n = double(s.n);
    if (kind == StdKind::Mode) {
        const std::vector<double> mode = closed_form_mode(s);
        SymMatrix bh = mp.model.beta_hess(mode);
        const SymMatrix eh = mp.prior.eta_hess(mode);
        SymMatrix h(bh.dim());
        for (std::size_t i = 0; i < bh.dim(); ++i)
            for (std::size_t j = 0; j < bh.dim(); ++j)
                h.at(i, j) = n * bh(i, j) + eh(i, j);
        const SpdFactorization f = spd_sqrt(h);
        double det = 1.0;
        for (double l : f.eigenvalues) det /= std::sqrt(l);
        return Standardization{StdKind::Mode, mode, f.sqrt, f.inv_sqrt, det};
    }
    const std::vector<double> mle = closed_form_mle(s);
    const SpdFactorization f = spd_sqrt(mp.model.beta_hess(mle));
    const double rn = std::sqrt(n);
    const std::size_t k = f.sqrt.dim();
    SymMatrix scale(k), inv(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            scale.at(i, j) = rn * f.sqrt(i, j);
            inv.at(i, j) = f.inv_sqrt(i, j) / rn;
        }
    double det = 1.0;
    for (double l : f.eigenvalues) det /= (rn * std::sqrt(l));
    return Standardization{StdKind::Mle, mle, scale, inv, det};
}

// ---------------------------------------------------------------------------
// exact posterior laws (conjugate updates)
// ---------------------------------------------------------------------------

std::unique_ptr<PosteriorDist> ExampleSpec::exact_posterior(
    const DataSummary& s) const {
    const auto& tau = cfg_.tau;
    const double n = double(s.n);
    switch (cfg_.family) {
        case Family::Bernoulli:
            return make_logit_beta_posterior(tau[0] + s.t[0],
                                             n - s.t[0] + tau[1] - tau[0]);
        case Family::BernoulliHyperbolic: {
            const ModelPrior mp = model_prior();
            const PosteriorContext ctx =
                build_context(mp.model, mp.prior, s, ContextOptions{});
            return make_numeric_posterior(ctx);
        }
        case Family::Poisson:
            return make_log_gamma_posterior(tau[0] + s.t[0], n + tau[1]);
        case Family::NormalPrecision: {
            if (!(n + 2.0 * tau[1] > 0.0))
                throw AssumptionFailure(
                    "Assumption 0 needs n + 2 tau2 > 0 (n too small for this prior)");
            return make_gamma_posterior(0.5 * n + tau[1] + 1.0, tau[0] - s.t[0]);
        }
        case Family::Weibull: {
            if (!(n + tau[1] > 0.0))
                throw AssumptionFailure(
                    "Assumption 0 needs n + tau2 > 0 (n too small for this prior)");
            return make_gamma_posterior(n + tau[1] + 1.0, tau[0] - s.t[0]);
        }
        case Family::NegBin: {
            const double r = cfg_.fixed[0];
            if (!(n * r + tau[1] > 0.0))
                throw AssumptionFailure("Assumption 0 needs n r + tau2 > 0");
            return make_log_beta_posterior(tau[0] + s.t[0], n * r + tau[1] + 1.0);
        }
        case Family::Multinomial: {
            const std::size_t k = tau.size();
            std::vector<double> alpha(k);
            double head_tau = 0.0, head_count = 0.0;
            for (std::size_t j = 0; j + 1 < k; ++j) {
                alpha[j] = tau[j] + s.t[j];
                head_tau += tau[j];
                head_count += s.t[j];
            }
            alpha[k - 1] = tau[k - 1] - head_tau + (n - head_count);
            return make_logistic_dirichlet_posterior(std::move(alpha));
        }
        default: {
            if (!(0.5 * n + tau[0] > 0.0))
                throw AssumptionFailure("Assumption 0 needs n/2 + tau1 > 0");
            return make_normal_gamma_posterior(s.t[0] + tau[2], tau[3] - s.t[1],
                                               0.5 * n + tau[1], 0.5 * n + tau[0]);
        }
    }
}

// ---------------------------------------------------------------------------
// closed-form bound formulas
// ---------------------------------------------------------------------------

double multinomial_b3_lambda_min(const DataSummary& s,
                                 const std::vector<double>& tau) {
    if (tau.size() != 3)
        throw HyperparameterOutOfRange("closed lambda_min is for 3 categories");
    const double n = double(s.n);
    const double c1 = s.t[0], c2 = s.t[1];
    const double b11 =
        (c1 + tau[0]) * (n + tau[2] - tau[0] - c1) / ((n + tau[2]) * n);
    const double b22 =
        (c2 + tau[1]) * (n + tau[2] - tau[1] - c2) / ((n + tau[2]) * n);
    const double b12 = -(c1 + tau[0]) * (c2 + tau[1]) / ((n + tau[2]) * n);
    const double gap = std::sqrt((b11 - b22) * (b11 - b22) + 4.0 * b12 * b12);
    return 0.5 * (b11 + b22 - gap);
}

double normal_meanvar_lambda_min(const DataSummary& s,
                                 const std::vector<double>& tau) {
    const double n = double(s.n);
    const double s1 = s.t[0];
    const double s2 = -2.0 * s.t[1];  // sum of squares
    const double a1 = n + 2.0 * tau[0], a2 = n + 2.0 * tau[1];
    const double q = tau[2] + s1;
    const double factor =
        (a2 * (2.0 * tau[3] + s2) - q * q) / (4.0 * a1 * a2 * a2);
    const double inner = 2.0 * n * n +
                         2.0 * n * (4.0 * tau[1] + tau[3] + 0.5 * s2) +
                         8.0 * tau[1] * tau[1] + 4.0 * tau[1] * tau[3] +
                         2.0 * tau[1] * s2 + tau[2] * tau[2] + 2.0 * tau[2] * s1 +
                         s1 * s1;
    const double big = 2.0 * a2 * (n + 2.0 * tau[1] + tau[3] + 0.5 * s2) + q * q;
    const double rad = big * big + 8.0 * a2 * a2 * q * q -
                       16.0 * a2 * a2 * a2 * (tau[3] + 0.5 * s2);
    return factor * (inner - std::sqrt(rad));
}

std::vector<ClosedBound> ExampleSpec::closed_bounds(const DataSummary& s,
                                                    const ExpectOptions& opts) const {
    const auto& tau = cfg_.tau;
    const double n = double(s.n);
    std::vector<ClosedBound> out;

    switch (cfg_.family) {
        case Family::Bernoulli: {
            const double t = s.t[0];
            const std::unique_ptr<PosteriorDist> post = exact_posterior(s);
            const Standardization sm = closed_standardization(s, StdKind::Mode);
            const double m2 = abs_moments(*post, sm, opts).second[0];
            const double a = tau[0] + t, b = n - t + tau[1] - tau[0];
            const double delta = kInvTwelveSqrt3 *
                                 std::pow(n + tau[1], 2.5) /
                                 (std::pow(a, 1.5) * std::pow(b, 1.5)) * m2;
            out.push_back({"closed-wass", Metric::Wass, StdKind::Mode, delta});
            out.push_back({"closed-tv", Metric::TV, StdKind::Mode,
                           kUniTvWeight * delta});

            const Standardization sd = closed_standardization(s, StdKind::Mle);
            const double m2d = abs_moments(*post, sd, opts).second[0];
            const double xbar = t / n;
            const double sup = std::max(tau[0], tau[1] - tau[0]);
            const double weak =
                (kInvTwelveSqrt3 * m2d / (xbar * (1.0 - xbar)) + sup) /
                std::sqrt(n * xbar * (1.0 - xbar));
            out.push_back({"closed-mle-weak-wass", Metric::Wass, StdKind::Mle, weak});
            out.push_back({"closed-mle-weak-tv", Metric::TV, StdKind::Mle,
                           kUniTvWeight * weak});
            break;
        }
        case Family::BernoulliHyperbolic: {
            const std::unique_ptr<PosteriorDist> post = exact_posterior(s);
            const Standardization sd = closed_standardization(s, StdKind::Mle);
            const double m2d = abs_moments(*post, sd, opts).second[0];
            const double xbar = s.t[0] / n;
            const double weak =
                (kInvTwelveSqrt3 * m2d / (xbar * (1.0 - xbar)) + 1.0) /
                std::sqrt(n * xbar * (1.0 - xbar));
            out.push_back({"closed-mle-weak-wass", Metric::Wass, StdKind::Mle, weak});
            out.push_back({"closed-mle-weak-tv", Metric::TV, StdKind::Mle,
                           kUniTvWeight * weak});
            break;
        }
        case Family::Poisson: {
            const double c = tau[0] + s.t[0];  // lambda''(mode)
            const double rc = std::sqrt(c);
            const std::unique_ptr<PosteriorDist> post = exact_posterior(s);
            const Standardization sm = closed_standardization(s, StdKind::Mode);
            const double center = sm.center[0];
            const double scale = sm.scale(0, 0);
            auto w_of = [center, scale](const std::vector<double>& theta) {
                return scale * (theta[0] - center);
            };
            const double e_wass =
                expect(*post,
                       [&](const std::vector<double>& theta) {
                           const double w = w_of(theta);
                           return w * w * std::exp(std::abs(w) / rc);
                       },
                       opts)
                    .value;
            const double e_tv =
                expect(*post,
                       [&](const std::vector<double>& theta) {
                           const double w = w_of(theta);
                           return std::min(kUniTvWeight * w * w, std::abs(w)) *
                                  std::exp(std::abs(w) / rc);
                       },
                       opts)
                    .value;
            const double e_abs =
                expect(*post,
                       [&](const std::vector<double>& theta) {
                           return std::abs(w_of(theta));
                       },
                       opts)
                    .value;
            out.push_back({"closed-wass", Metric::Wass, StdKind::Mode,
                           e_wass / (2.0 * rc)});
            out.push_back({"closed-tv", Metric::TV, StdKind::Mode, e_tv / (2.0 * rc)});
            const double eps_const = 0.5 * (kTailConst + std::exp(1.0));
            out.push_back({"closed-tv-eps", Metric::TV, StdKind::Mode,
                           eps_const * e_abs / rc});
            break;
        }
        case Family::NormalPrecision: {
            const double c2 = n + 2.0 * tau[1];
            if (!(c2 > 0.0))
                throw AssumptionFailure("n + 2 tau2 must be positive");
            out.push_back({"closed-tv", Metric::TV, StdKind::Mode,
                           0.5 * std::sqrt(M_PI) / std::sqrt(c2)});
            const double wass = std::sqrt(2.0) / std::sqrt(c2);
            out.push_back({"closed-wass", Metric::Wass, StdKind::Mode, wass});
            out.push_back({"closed-wass-lower", Metric::Wass, StdKind::Mode, wass,
                           true});

            const double ns2 = -2.0 * s.t[0];
            const double s2 = ns2 / n;
            const double phi = ns2 + 2.0 * tau[0];
            const double bn =
                0.5 * std::sqrt(M_PI) / (s2 * std::sqrt(n)) *
                ((2.0 * std::pow(tau[1] * ns2 - n * tau[0], 2) + c2 * ns2 * ns2) /
                     (n * c2 * phi) +
                 std::sqrt(2.0 * n) * std::abs(tau[1]) * phi / (c2 * ns2));
            out.push_back({"closed-mle-tv", Metric::TV, StdKind::Mle, bn});
            out.push_back({"closed-mle-wass", Metric::Wass, StdKind::Mle,
                           std::sqrt(8.0 / M_PI) * bn});
            out.push_back({"closed-mle-wass-lower", Metric::Wass, StdKind::Mle,
                           std::sqrt(2.0 * n) *
                               std::abs((tau[1] + 1.0) * s2 - tau[0]) / phi,
                           true});
            break;
        }
        case Family::Weibull: {
            const double c = n + tau[1];
            if (!(c > 0.0)) throw AssumptionFailure("n + tau2 must be positive");
            out.push_back({"closed-tv", Metric::TV, StdKind::Mode,
                           0.25 * std::sqrt(2.0 * M_PI) / std::sqrt(c)});
            out.push_back({"closed-wass", Metric::Wass, StdKind::Mode,
                           1.0 / std::sqrt(c)});
            out.push_back({"closed-wass-lower", Metric::Wass, StdKind::Mode,
                           1.0 / std::sqrt(c), true});
            break;
        }
        case Family::NegBin: {
            const double r = cfg_.fixed[0];
            const double a = s.t[0] + tau[0];
            const double b = a + tau[1] + n * r;
            const double c = n * r + tau[1];
            const std::unique_ptr<PosteriorDist> post = exact_posterior(s);
            const Standardization sm = closed_standardization(s, StdKind::Mode);
            const double e_abs =
                expect(*post,
                       [&](const std::vector<double>& theta) {
                           return std::abs(sm.forward(theta)[0]);
                       },
                       opts)
                    .value;
            const double bracket =
                2.0 * (3.0 + std::sqrt(5.0)) / std::log(b / a) +
                c * c * (b * b * b - a * a * a) /
                    (std::pow(a, 1.5) * std::pow(b, 1.5) *
                     std::pow(std::sqrt(b) - std::sqrt(a), 4));
            out.push_back({"closed-tv-eps", Metric::TV, StdKind::Mode,
                           std::sqrt(c) * e_abs / (2.0 * std::sqrt(a * b)) * bracket});
            break;
        }
        case Family::Multinomial: {
            const std::size_t cats = tau.size();
            const std::size_t dimk = cats - 1;
            const double tk = tau[cats - 1];
            // B_k = H_lambda(mode) / n, entries in closed form
            SymMatrix bk(dimk);
            for (std::size_t u = 0; u < dimk; ++u) {
                const double cu = s.t[u] + tau[u];
                bk.at(u, u) = cu * (n + tk - tau[u] - s.t[u]) / ((n + tk) * n);
                for (std::size_t v = u + 1; v < dimk; ++v) {
                    const double cv = s.t[v] + tau[v];
                    bk.at(u, v) = bk.at(v, u) = -cu * cv / ((n + tk) * n);
                }
            }
            const double cnorm = matrix_norms(spd_sqrt(bk).inv_sqrt).inf_norm;
            const std::unique_ptr<PosteriorDist> post = exact_posterior(s);
            const Standardization sm = closed_standardization(s, StdKind::Mode);
            const AbsMoments mom = abs_moments(*post, sm, opts);
            double m2sum = 0.0;
            for (double v : mom.second) m2sum += v;
            const double delta = double(dimk) * double(dimk) * cnorm * cnorm *
                                 cnorm * (n + tk) / std::pow(n, 1.5) * m2sum;
            out.push_back({"closed-wass", Metric::Wass, StdKind::Mode, delta});
            out.push_back({"closed-tv", Metric::TV, StdKind::Mode,
                           2.0 * std::sqrt(2.0 * M_PI) / 3.0 * delta});
            break;
        }
        default: {  // NormalMeanVar
            const double lmin = normal_meanvar_lambda_min(s, tau);
            if (!(lmin > 0.0))
                throw AssumptionFailure("H_lambda(mode) not positive definite");
            const double ltil = lmin / n;
            const std::vector<double> mode = closed_form_mode(s);
            const std::unique_ptr<PosteriorDist> post = exact_posterior(s);
            const Standardization sm = closed_standardization(s, StdKind::Mode);
            const AbsMoments mom = abs_moments(*post, sm, opts);
            const double m2sum = mom.second[0] + mom.second[1];
            const double m1sum = mom.first[0] + mom.first[1];
            const double t1 = mode[0], t2 = mode[1];
            const double lead = 32.0 * std::sqrt(M_PI) / (3.0 * std::pow(ltil, 1.5)) *
                                (n + 2.0 * (tau[0] + tau[1])) / std::pow(n, 1.5) *
                                (1.0 + 3.5 * t1 * t1 + 0.625 * t2 * t2) *
                                (1.0 / (t2 * t2) + 4.0 / (t2 * t2 * t2 * t2)) *
                                m2sum;
            const double tail =
                (3.0 + std::sqrt(5.0)) / (t2 * std::sqrt(n * ltil)) * m1sum;
            out.push_back({"closed-tv", Metric::TV, StdKind::Mode, lead + tail});
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// data samplers
// ---------------------------------------------------------------------------

void ExampleSpec::sample_data(CounterRng& rng, std::size_t n,
                              std::vector<std::vector<double>>& out) const {
    out.clear();
    out.reserve(n);
    const auto& dp = cfg_.data_params;
    switch (cfg_.family) {
        case Family::Bernoulli:
        case Family::BernoulliHyperbolic: {
            const double p = dp.at(0);
            for (std::size_t i = 0; i < n; ++i)
                out.push_back({rng.uniform() < p ? 1.0 : 0.0});
            break;
        }
        case Family::Poisson: {
            const double mu = dp.at(0);
            for (std::size_t i = 0; i < n; ++i)
                out.push_back({double(rng.poisson(mu))});
            break;
        }
        case Family::NormalPrecision: {
            const double m = cfg_.fixed.empty() ? 0.0 : cfg_.fixed[0];
            const double sd = std::sqrt(dp.at(0));
            for (std::size_t i = 0; i < n; ++i)
                out.push_back({m + sd * rng.normal()});
            break;
        }
        case Family::Weibull: {
            const double shape = cfg_.fixed.at(0);
            const double ell = dp.at(0);
            for (std::size_t i = 0; i < n; ++i)
                out.push_back({ell * std::pow(-std::log(rng.uniform_pos()),
                                              1.0 / shape)});
            break;
        }
        case Family::NegBin: {
            const double r = cfg_.fixed.at(0);
            const double p = dp.at(0);
            for (std::size_t i = 0; i < n; ++i) {
                const double lam = rng.gamma(r, (1.0 - p) / p);
                out.push_back({double(rng.poisson(lam))});
            }
            break;
        }
        case Family::Multinomial: {
            const std::size_t km1 = cfg_.tau.size() - 1;
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<double> x(km1, 0.0);
                double u = rng.uniform();
                for (std::size_t j = 0; j < km1; ++j) {
                    if (u < dp.at(j)) {
                        x[j] = 1.0;
                        break;
                    }
                    u -= dp.at(j);
                }
                out.push_back(std::move(x));
            }
            break;
        }
        default: {
            const double mu = dp.at(0);
            const double sd = std::sqrt(dp.at(1));
            for (std::size_t i = 0; i < n; ++i)
                out.push_back({mu + sd * rng.normal()});
            break;
        }
    }
}

// ---------------------------------------------------------------------------
// presets and the exact gamma-normal formula
// ---------------------------------------------------------------------------

const std::vector<Preset>& presets() {
    static const std::vector<Preset> list = {
        {"fig1a-bernoulli", {Family::Bernoulli, {1.0, 3.0}, {}, {0.3}}},
        {"fig1b-poisson", {Family::Poisson, {1.0, 3.0}, {}, {1.0}}},
        {"fig1c-normal", {Family::NormalPrecision, {2.0, 0.5}, {0.0}, {3.0}}},
        {"fig1d-multinomial",
         {Family::Multinomial, {0.2, 0.2, 1.5}, {}, {0.2, 0.2}}},
        {"ex4-weibull", {Family::Weibull, {1.0, 1.0}, {2.0}, {1.0}}},
        {"ex5-negbin", {Family::NegBin, {1.0, 1.0}, {2.0}, {0.3}}},
        {"ex7-normalmv",
         {Family::NormalMeanVar, {1.0, 0.5, 0.5, 1.0}, {}, {1.0, 2.0}}},
        {"ex1-hyperbolic", {Family::BernoulliHyperbolic, {}, {}, {0.3}}},
    };
    return list;
}

const Preset& preset_by_name(const std::string& name) {
    for (const auto& p : presets())
        if (p.name == name) return p;
    throw ConfigError("unknown preset: " + name);
}

double gamma_normal_exact_wass(double alpha, double rate) {
    if (!(alpha > 1.0)) throw ShapeTooSmall(alpha);
    if (!(rate > 0.0)) throw HyperparameterOutOfRange("rate must be positive");
    return 1.0 / rate;
}

}  // namespace bvm
