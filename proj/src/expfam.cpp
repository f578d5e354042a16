#include "bvm/expfam.hpp"

#include <cmath>

namespace bvm {

DataSummary summarize(const CanonicalModel& model,
                      const std::vector<std::vector<double>>& data) {
    if (data.empty()) throw EmptyData();
    DataSummary out;
    out.n = data.size();
    out.t.assign(model.k, 0.0);
    std::vector<double> comp(model.k, 0.0);  // Kahan carry
    double sum_sq = 0.0, sum_sq_c = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i].size() != model.d)
            throw DimensionMismatch("observation dimension mismatch at index " +
                                    std::to_string(i));
        if (!model.obs_in_support(data[i]))
            throw ObservationOutOfSupport(i, model.name);
        const std::vector<double> h = model.suff_stat(data[i]);
        for (std::size_t u = 0; u < model.k; ++u) {
            const double y = h[u] - comp[u];
            const double s = out.t[u] + y;
            comp[u] = (s - out.t[u]) - y;
            out.t[u] = s;
        }
        if (model.d == 1) {
            const double y = data[i][0] * data[i][0] - sum_sq_c;
            const double s = sum_sq + y;
            sum_sq_c = (s - sum_sq) - y;
            sum_sq = s;
        }
    }
    if (model.name == "normal-precision") {
        // h(x) = -(x-m)^2/2, so sum (x-m)^2 = -2 T_1
        out.extras["s2_times_n"] = -2.0 * out.t[0];
    }
    if (model.d == 1) out.extras["sum_sq"] = sum_sq;
    return out;
}

void Lambda::require(Smoothness s, const char* what) const {
    if (static_cast<int>(prior_->smoothness) < static_cast<int>(s))
        throw SmoothnessViolation(std::string(what) + " requested but prior '" +
                                  prior_->name + "' is not smooth enough");
}

double Lambda::value(const std::vector<double>& theta) const {
    return n_ * model_->beta(theta) + prior_->eta(theta);
}

std::vector<double> Lambda::grad(const std::vector<double>& theta) const {
    std::vector<double> g = model_->beta_grad(theta);
    const std::vector<double> e = prior_->eta_grad(theta);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = n_ * g[i] + e[i];
    return g;
}

SymMatrix Lambda::hess(const std::vector<double>& theta) const {
    require(Smoothness::C2, "lambda Hessian");
    SymMatrix h = model_->beta_hess(theta);
    const SymMatrix e = prior_->eta_hess(theta);
    SymMatrix out(h.dim());
    for (std::size_t i = 0; i < h.dim(); ++i)
        for (std::size_t j = 0; j < h.dim(); ++j)
            out.at(i, j) = n_ * h(i, j) + e(i, j);
    return out;
}

double Lambda::third(const std::vector<double>& theta, std::size_t l,
                     std::size_t u, std::size_t v) const {
    require(Smoothness::C3, "lambda third derivative");
    return n_ * model_->beta_third(theta, l, u, v) +
           prior_->eta_third(theta, l, u, v);
}

// ---------------------------------------------------------------------------
// builtin models
// ---------------------------------------------------------------------------

namespace {

double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

double log1p_exp(double t) {
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

bool is_count(double x) {
    return x >= 0.0 && x == std::floor(x) && std::isfinite(x);
}

std::vector<double> scalar_vec(double v) { return std::vector<double>{v}; }

// Softmax probabilities p_u = e^{theta_u} / (1 + sum_j e^{theta_j}) for the
// multinomial cumulant; p has size k-1.
std::vector<double> softmax_probs(const std::vector<double>& theta) {
    double m = 0.0;
    for (double t : theta) m = std::max(m, t);
    double denom = std::exp(-m);
    std::vector<double> p(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
        p[j] = std::exp(theta[j] - m);
        denom += p[j];
    }
    for (double& v : p) v /= denom;
    return p;
}

double softmax_log_denom(const std::vector<double>& theta) {
    double m = 0.0;
    for (double t : theta) m = std::max(m, t);
    double denom = std::exp(-m);
    for (double t : theta) denom += std::exp(t - m);
    return m + std::log(denom);
}

double softmax_hess(const std::vector<double>& p, std::size_t u, std::size_t v) {
    return u == v ? p[u] * (1.0 - p[u]) : -p[u] * p[v];
}

double softmax_third(const std::vector<double>& p, std::size_t l, std::size_t u,
                     std::size_t v) {
    double s = 2.0 * p[l] * p[u] * p[v];
    if (l == u && u == v) s += p[l];
    if (l == u) s -= p[l] * p[v];
    if (l == v) s -= p[l] * p[u];
    if (u == v) s -= p[l] * p[u];
    return s;
}

// Shared exponent shape for the normal mean+variance family:
//   f(theta) = c_log * log(2 pi / theta_2) + c_q * theta_1^2 / theta_2
//              - c_1 * theta_1 + c_2 * theta_2
struct MeanVarExponent {
    double c_log, c_q, c_1, c_2;

    double value(const std::vector<double>& t) const {
        return c_log * (std::log(2.0 * M_PI) - std::log(t[1])) +
               c_q * t[0] * t[0] / t[1] - c_1 * t[0] + c_2 * t[1];
    }
    std::vector<double> grad(const std::vector<double>& t) const {
        return {2.0 * c_q * t[0] / t[1] - c_1,
                -c_log / t[1] - c_q * t[0] * t[0] / (t[1] * t[1]) + c_2};
    }
    SymMatrix hess(const std::vector<double>& t) const {
        SymMatrix h(2);
        h.at(0, 0) = 2.0 * c_q / t[1];
        h.at(0, 1) = h.at(1, 0) = -2.0 * c_q * t[0] / (t[1] * t[1]);
        h.at(1, 1) = c_log / (t[1] * t[1]) +
                     2.0 * c_q * t[0] * t[0] / (t[1] * t[1] * t[1]);
        return h;
    }
    double third(const std::vector<double>& t, std::size_t l, std::size_t u,
                 std::size_t v) const {
        const int ones = static_cast<int>(l == 1) + static_cast<int>(u == 1) +
                         static_cast<int>(v == 1);
        const double t2 = t[1];
        switch (ones) {
            case 0: return 0.0;
            case 1: return -2.0 * c_q / (t2 * t2);
            case 2: return 4.0 * c_q * t[0] / (t2 * t2 * t2);
            default:
                return -2.0 * c_log / (t2 * t2 * t2) -
                       6.0 * c_q * t[0] * t[0] / (t2 * t2 * t2 * t2);
        }
    }
};

}  // namespace

CanonicalModel model_bernoulli() {
    CanonicalModel m;
    m.name = "bernoulli";
    m.k = m.d = 1;
    m.suff_stat = [](const std::vector<double>& x) { return scalar_vec(x[0]); };
    m.carrier = [](const std::vector<double>&) { return 0.0; };
    m.obs_in_support = [](const std::vector<double>& x) {
        return x[0] == 0.0 || x[0] == 1.0;
    };
    m.param_in_support = [](const std::vector<double>& t) {
        return std::isfinite(t[0]);
    };
    m.beta = [](const std::vector<double>& t) { return log1p_exp(t[0]); };
    m.beta_grad = [](const std::vector<double>& t) {
        return scalar_vec(sigmoid(t[0]));
    };
    m.beta_hess = [](const std::vector<double>& t) {
        const double s = sigmoid(t[0]);
        return SymMatrix::diagonal({s * (1.0 - s)});
    };
    m.beta_third = [](const std::vector<double>& t, std::size_t, std::size_t,
                      std::size_t) {
        const double s = sigmoid(t[0]);
        return s * (1.0 - s) * (1.0 - 2.0 * s);
    };
    m.default_start = {0.0};
    return m;
}

CanonicalModel model_poisson() {
    CanonicalModel m;
    m.name = "poisson";
    m.k = m.d = 1;
    m.suff_stat = [](const std::vector<double>& x) { return scalar_vec(x[0]); };
    m.carrier = [](const std::vector<double>& x) { return std::lgamma(x[0] + 1.0); };
    m.obs_in_support = [](const std::vector<double>& x) { return is_count(x[0]); };
    m.param_in_support = [](const std::vector<double>& t) {
        return std::isfinite(t[0]);
    };
    m.beta = [](const std::vector<double>& t) { return std::exp(t[0]); };
    m.beta_grad = [](const std::vector<double>& t) {
        return scalar_vec(std::exp(t[0]));
    };
    m.beta_hess = [](const std::vector<double>& t) {
        return SymMatrix::diagonal({std::exp(t[0])});
    };
    m.beta_third = [](const std::vector<double>& t, std::size_t, std::size_t,
                      std::size_t) { return std::exp(t[0]); };
    m.default_start = {0.0};
    return m;
}

CanonicalModel model_normal_precision(double mean) {
    CanonicalModel m;
    m.name = "normal-precision";
    m.k = m.d = 1;
    m.suff_stat = [mean](const std::vector<double>& x) {
        const double c = x[0] - mean;
        return scalar_vec(-0.5 * c * c);
    };
    m.carrier = [](const std::vector<double>&) {
        return 0.5 * std::log(2.0 * M_PI);
    };
    m.obs_in_support = [](const std::vector<double>& x) {
        return std::isfinite(x[0]);
    };
    m.param_in_support = [](const std::vector<double>& t) {
        return t[0] > 0.0 && std::isfinite(t[0]);
    };
    m.beta = [](const std::vector<double>& t) { return -0.5 * std::log(t[0]); };
    m.beta_grad = [](const std::vector<double>& t) {
        return scalar_vec(-0.5 / t[0]);
    };
    m.beta_hess = [](const std::vector<double>& t) {
        return SymMatrix::diagonal({0.5 / (t[0] * t[0])});
    };
    m.beta_third = [](const std::vector<double>& t, std::size_t, std::size_t,
                      std::size_t) { return -1.0 / (t[0] * t[0] * t[0]); };
    m.default_start = {1.0};
    return m;
}

CanonicalModel model_weibull(double shape) {
    if (!(shape > 0.0))
        throw HyperparameterOutOfRange("weibull shape must be positive");
    CanonicalModel m;
    m.name = "weibull";
    m.k = m.d = 1;
    m.suff_stat = [shape](const std::vector<double>& x) {
        return scalar_vec(-std::pow(x[0], shape));
    };
    m.carrier = [shape](const std::vector<double>& x) {
        return -std::log(shape) - (shape - 1.0) * std::log(x[0]);
    };
    m.obs_in_support = [](const std::vector<double>& x) { return x[0] > 0.0; };
    m.param_in_support = [](const std::vector<double>& t) {
        return t[0] > 0.0 && std::isfinite(t[0]);
    };
    m.beta = [](const std::vector<double>& t) { return -std::log(t[0]); };
    m.beta_grad = [](const std::vector<double>& t) {
        return scalar_vec(-1.0 / t[0]);
    };
    m.beta_hess = [](const std::vector<double>& t) {
        return SymMatrix::diagonal({1.0 / (t[0] * t[0])});
    };
    m.beta_third = [](const std::vector<double>& t, std::size_t, std::size_t,
                      std::size_t) { return -2.0 / (t[0] * t[0] * t[0]); };
    m.default_start = {1.0};
    return m;
}

CanonicalModel model_negbin(double r) {
    if (!(r > 0.0))
        throw HyperparameterOutOfRange("negative binomial r must be positive");
    CanonicalModel m;
    m.name = "negbin";
    m.k = m.d = 1;
    m.suff_stat = [](const std::vector<double>& x) { return scalar_vec(x[0]); };
    m.carrier = [r](const std::vector<double>& x) {
        return -(std::lgamma(x[0] + r) - std::lgamma(x[0] + 1.0) - std::lgamma(r));
    };
    m.obs_in_support = [](const std::vector<double>& x) { return is_count(x[0]); };
    m.param_in_support = [](const std::vector<double>& t) {
        return t[0] < 0.0 && std::isfinite(t[0]);
    };
    m.beta = [r](const std::vector<double>& t) {
        return -r * std::log1p(-std::exp(t[0]));
    };
    m.beta_grad = [r](const std::vector<double>& t) {
        const double e = std::exp(t[0]);
        return scalar_vec(r * e / (1.0 - e));
    };
    m.beta_hess = [r](const std::vector<double>& t) {
        const double e = std::exp(t[0]);
        const double q = 1.0 - e;
        return SymMatrix::diagonal({r * e / (q * q)});
    };
    m.beta_third = [r](const std::vector<double>& t, std::size_t, std::size_t,
                       std::size_t) {
        const double e = std::exp(t[0]);
        const double q = 1.0 - e;
        return r * e * (1.0 + e) / (q * q * q);
    };
    m.default_start = {-0.6931471805599453};  // p = 1/2
    return m;
}

CanonicalModel model_multinomial(std::size_t categories) {
    if (categories < 2)
        throw HyperparameterOutOfRange("multinomial needs >= 2 categories");
    const std::size_t k = categories - 1;
    CanonicalModel m;
    m.name = "multinomial";
    m.k = m.d = k;
    m.suff_stat = [](const std::vector<double>& x) { return x; };
    m.carrier = [](const std::vector<double>&) { return 0.0; };
    m.obs_in_support = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) {
            if (v != 0.0 && v != 1.0) return false;
            s += v;
        }
        return s <= 1.0;
    };
    m.param_in_support = [](const std::vector<double>& t) {
        for (double v : t)
            if (!std::isfinite(v)) return false;
        return true;
    };
    m.beta = [](const std::vector<double>& t) { return softmax_log_denom(t); };
    m.beta_grad = [](const std::vector<double>& t) { return softmax_probs(t); };
    m.beta_hess = [k](const std::vector<double>& t) {
        const std::vector<double> p = softmax_probs(t);
        SymMatrix h(k);
        for (std::size_t u = 0; u < k; ++u)
            for (std::size_t v = u; v < k; ++v)
                h.at(u, v) = h.at(v, u) = softmax_hess(p, u, v);
        return h;
    };
    m.beta_third = [](const std::vector<double>& t, std::size_t l, std::size_t u,
                      std::size_t v) {
        return softmax_third(softmax_probs(t), l, u, v);
    };
    m.default_start.assign(k, 0.0);
    return m;
}

CanonicalModel model_normal_meanvar() {
    CanonicalModel m;
    m.name = "normal-meanvar";
    m.k = 2;
    m.d = 1;
    m.suff_stat = [](const std::vector<double>& x) {
        return std::vector<double>{x[0], -0.5 * x[0] * x[0]};
    };
    m.carrier = [](const std::vector<double>&) { return 0.0; };
    m.obs_in_support = [](const std::vector<double>& x) {
        return std::isfinite(x[0]);
    };
    m.param_in_support = [](const std::vector<double>& t) {
        return std::isfinite(t[0]) && t[1] > 0.0 && std::isfinite(t[1]);
    };
    const MeanVarExponent b{0.5, 0.5, 0.0, 0.0};
    m.beta = [b](const std::vector<double>& t) { return b.value(t); };
    m.beta_grad = [b](const std::vector<double>& t) { return b.grad(t); };
    m.beta_hess = [b](const std::vector<double>& t) { return b.hess(t); };
    m.beta_third = [b](const std::vector<double>& t, std::size_t l, std::size_t u,
                       std::size_t v) { return b.third(t, l, u, v); };
    m.default_start = {0.0, 1.0};
    return m;
}

// ---------------------------------------------------------------------------
// builtin priors
// ---------------------------------------------------------------------------

PriorSpec prior_bernoulli_conjugate(double tau1, double tau2) {
    if (!(tau1 > 0.0) || !(tau2 - tau1 > 0.0))
        throw HyperparameterOutOfRange(
            "bernoulli-beta requires tau1 > 0 and tau2 - tau1 > 0");
    PriorSpec p;
    p.name = "beta-conjugate";
    p.smoothness = Smoothness::C3;
    p.eta = [tau1, tau2](const std::vector<double>& t) {
        return -tau1 * t[0] + tau2 * log1p_exp(t[0]);
    };
    p.eta_grad = [tau1, tau2](const std::vector<double>& t) {
        return scalar_vec(-tau1 + tau2 * sigmoid(t[0]));
    };
    p.eta_hess = [tau2](const std::vector<double>& t) {
        const double s = sigmoid(t[0]);
        return SymMatrix::diagonal({tau2 * s * (1.0 - s)});
    };
    p.eta_third = [tau2](const std::vector<double>& t, std::size_t, std::size_t,
                         std::size_t) {
        const double s = sigmoid(t[0]);
        return tau2 * s * (1.0 - s) * (1.0 - 2.0 * s);
    };
    p.eta_grad_sup = std::max(tau1, tau2 - tau1);
    return p;
}

PriorSpec prior_bernoulli_hyperbolic() {
    PriorSpec p;
    p.name = "hyperbolic";
    // Declared C1: only the gradient is exposed, which is all the weak-prior
    // MLE bound needs.
    p.smoothness = Smoothness::C1;
    p.eta = [](const std::vector<double>& t) {
        // -log cosh, stable for large |t|
        const double a = std::abs(t[0]);
        return -(a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0));
    };
    p.eta_grad = [](const std::vector<double>& t) {
        return scalar_vec(-std::tanh(t[0]));
    };
    p.eta_grad_sup = 1.0;
    return p;
}

PriorSpec prior_poisson_gamma(double tau1, double tau2) {
    if (!(tau1 > 0.0) || tau2 < 0.0)
        throw HyperparameterOutOfRange(
            "poisson-gamma requires tau1 > 0 and tau2 >= 0");
    PriorSpec p;
    p.name = "gamma-poisson";
    p.smoothness = Smoothness::C3;
    p.eta = [tau1, tau2](const std::vector<double>& t) {
        return -tau1 * t[0] + tau2 * std::exp(t[0]);
    };
    p.eta_grad = [tau1, tau2](const std::vector<double>& t) {
        return scalar_vec(-tau1 + tau2 * std::exp(t[0]));
    };
    p.eta_hess = [tau2](const std::vector<double>& t) {
        return SymMatrix::diagonal({tau2 * std::exp(t[0])});
    };
    p.eta_third = [tau2](const std::vector<double>& t, std::size_t, std::size_t,
                         std::size_t) { return tau2 * std::exp(t[0]); };
    return p;
}

PriorSpec prior_gamma_exponent(double tau1, double tau2) {
    // tau1 = 0, tau2 = -1 is the improper Jeffreys setting; its n-floor is
    // enforced when the posterior is built (Assumption 0 needs n + 2 tau2 > 0).
    if (tau1 < 0.0 || tau2 < -1.0)
        throw HyperparameterOutOfRange(
            "gamma prior requires tau1 >= 0 and tau2 >= -1");
    PriorSpec p;
    p.name = "gamma-exponent";
    p.smoothness = Smoothness::C3;
    p.eta = [tau1, tau2](const std::vector<double>& t) {
        return tau1 * t[0] - tau2 * std::log(t[0]);
    };
    p.eta_grad = [tau1, tau2](const std::vector<double>& t) {
        return scalar_vec(tau1 - tau2 / t[0]);
    };
    p.eta_hess = [tau2](const std::vector<double>& t) {
        return SymMatrix::diagonal({tau2 / (t[0] * t[0])});
    };
    p.eta_third = [tau2](const std::vector<double>& t, std::size_t, std::size_t,
                         std::size_t) { return -2.0 * tau2 / (t[0] * t[0] * t[0]); };
    return p;
}

PriorSpec prior_negbin_conjugate(double tau1, double tau2) {
    if (!(tau1 > 0.0) || tau2 < -1.0)
        throw HyperparameterOutOfRange(
            "negbin prior requires tau1 > 0 and tau2 >= -1");
    PriorSpec p;
    p.name = "negbin-conjugate";
    p.smoothness = Smoothness::C3;
    p.eta = [tau1, tau2](const std::vector<double>& t) {
        return -tau1 * t[0] - tau2 * std::log1p(-std::exp(t[0]));
    };
    p.eta_grad = [tau1, tau2](const std::vector<double>& t) {
        const double e = std::exp(t[0]);
        return scalar_vec(-tau1 + tau2 * e / (1.0 - e));
    };
    p.eta_hess = [tau2](const std::vector<double>& t) {
        const double e = std::exp(t[0]);
        const double q = 1.0 - e;
        return SymMatrix::diagonal({tau2 * e / (q * q)});
    };
    p.eta_third = [tau2](const std::vector<double>& t, std::size_t, std::size_t,
                         std::size_t) {
        const double e = std::exp(t[0]);
        const double q = 1.0 - e;
        return tau2 * e * (1.0 + e) / (q * q * q);
    };
    return p;
}

PriorSpec prior_dirichlet(const std::vector<double>& tau) {
    if (tau.size() < 2)
        throw HyperparameterOutOfRange("dirichlet prior needs >= 2 parameters");
    const std::size_t k = tau.size() - 1;
    double head_sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        if (!(tau[j] > -1.0))
            throw HyperparameterOutOfRange("dirichlet requires tau_j > -1");
        head_sum += tau[j];
    }
    if (!(tau[k] > head_sum - 1.0))
        throw HyperparameterOutOfRange(
            "dirichlet requires tau_k > sum_j tau_j - 1");
    const double tail = tau[k];
    std::vector<double> head(tau.begin(), tau.begin() + k);

    PriorSpec p;
    p.name = "dirichlet";
    p.smoothness = Smoothness::C3;
    p.eta = [head, tail](const std::vector<double>& t) {
        double s = tail * softmax_log_denom(t);
        for (std::size_t j = 0; j < head.size(); ++j) s -= head[j] * t[j];
        return s;
    };
    p.eta_grad = [head, tail](const std::vector<double>& t) {
        std::vector<double> g = softmax_probs(t);
        for (std::size_t j = 0; j < g.size(); ++j) g[j] = tail * g[j] - head[j];
        return g;
    };
    p.eta_hess = [tail, k](const std::vector<double>& t) {
        const std::vector<double> pr = softmax_probs(t);
        SymMatrix h(k);
        for (std::size_t u = 0; u < k; ++u)
            for (std::size_t v = u; v < k; ++v)
                h.at(u, v) = h.at(v, u) = tail * softmax_hess(pr, u, v);
        return h;
    };
    p.eta_third = [tail](const std::vector<double>& t, std::size_t l,
                         std::size_t u, std::size_t v) {
        return tail * softmax_third(softmax_probs(t), l, u, v);
    };
    return p;
}

PriorSpec prior_normal_gamma(double tau1, double tau2, double tau3, double tau4) {
    const bool improper = tau2 == 0.0 && tau3 == 0.0 && tau4 == 0.0;
    if (!(tau1 > -1.5) || (!improper && !(tau4 > 0.0 && 4.0 * tau4 * tau2 > tau3 * tau3)))
        throw HyperparameterOutOfRange(
            "normal-meanvar prior requires tau4 > 0, tau1 > -3/2, 4*tau4*tau2 > tau3^2");
    PriorSpec p;
    p.name = "normal-gamma";
    p.smoothness = Smoothness::C3;
    const MeanVarExponent e{tau1, tau2, tau3, tau4};
    p.eta = [e](const std::vector<double>& t) { return e.value(t); };
    p.eta_grad = [e](const std::vector<double>& t) { return e.grad(t); };
    p.eta_hess = [e](const std::vector<double>& t) { return e.hess(t); };
    p.eta_third = [e](const std::vector<double>& t, std::size_t l, std::size_t u,
                      std::size_t v) { return e.third(t, l, u, v); };
    return p;
}

// ---------------------------------------------------------------------------

const std::vector<BuiltinFamily>& builtin_families() {
    static const std::vector<BuiltinFamily> families = {
        {"bernoulli-beta", 2, "",
         [](const std::vector<double>& tau, const std::vector<double>&) {
             return ModelPrior{model_bernoulli(),
                               prior_bernoulli_conjugate(tau[0], tau[1])};
         }},
        {"bernoulli-hyperbolic", 0, "",
         [](const std::vector<double>&, const std::vector<double>&) {
             return ModelPrior{model_bernoulli(), prior_bernoulli_hyperbolic()};
         }},
        {"poisson-gamma", 2, "",
         [](const std::vector<double>& tau, const std::vector<double>&) {
             return ModelPrior{model_poisson(), prior_poisson_gamma(tau[0], tau[1])};
         }},
        {"normal-precision-gamma", 2, "m (known mean)",
         [](const std::vector<double>& tau, const std::vector<double>& fixed) {
             const double m = fixed.empty() ? 0.0 : fixed[0];
             return ModelPrior{model_normal_precision(m),
                               prior_gamma_exponent(tau[0], tau[1])};
         }},
        {"weibull-gamma", 2, "m (known shape)",
         [](const std::vector<double>& tau, const std::vector<double>& fixed) {
             const double shape = fixed.empty() ? 1.0 : fixed[0];
             return ModelPrior{model_weibull(shape),
                               prior_gamma_exponent(tau[0], tau[1])};
         }},
        {"negbin-conjugate", 2, "r (known dispersion)",
         [](const std::vector<double>& tau, const std::vector<double>& fixed) {
             const double r = fixed.empty() ? 1.0 : fixed[0];
             return ModelPrior{model_negbin(r),
                               prior_negbin_conjugate(tau[0], tau[1])};
         }},
        {"multinomial-dirichlet", 0, "k (categories, default 3)",
         [](const std::vector<double>& tau, const std::vector<double>& fixed) {
             const std::size_t k =
                 fixed.empty() ? tau.size() : static_cast<std::size_t>(fixed[0]);
             if (tau.size() != k)
                 throw HyperparameterOutOfRange(
                     "multinomial-dirichlet needs one tau per category");
             return ModelPrior{model_multinomial(k), prior_dirichlet(tau)};
         }},
        {"normal-meanvar-conjugate", 4, "",
         [](const std::vector<double>& tau, const std::vector<double>&) {
             return ModelPrior{model_normal_meanvar(),
                               prior_normal_gamma(tau[0], tau[1], tau[2], tau[3])};
         }},
    };
    return families;
}

const BuiltinFamily& family_by_key(const std::string& key) {
    for (const auto& f : builtin_families())
        if (f.key == key) return f;
    throw ConfigError("unknown model key: " + key);
}

}  // namespace bvm
