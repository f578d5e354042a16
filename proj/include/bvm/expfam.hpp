#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bvm/errors.hpp"
#include "bvm/linalg.hpp"

namespace bvm {

enum class Smoothness { C1, C2, C3 };

// A k-parameter exponential family in canonical form,
//   p(x|theta) = exp( sum_u theta_u h_u(x) - g(x) - beta(theta) ),
// with closed-form derivatives of the cumulant beta through order 3.
struct CanonicalModel {
    std::string name;
    std::size_t k = 1;  // parameter dimension
    std::size_t d = 1;  // observation dimension

    std::function<std::vector<double>(const std::vector<double>&)> suff_stat;
    std::function<double(const std::vector<double>&)> carrier;  // g(x)
    std::function<bool(const std::vector<double>&)> obs_in_support;
    std::function<bool(const std::vector<double>&)> param_in_support;

    std::function<double(const std::vector<double>&)> beta;
    std::function<std::vector<double>(const std::vector<double>&)> beta_grad;
    std::function<SymMatrix(const std::vector<double>&)> beta_hess;
    std::function<double(const std::vector<double>&, std::size_t, std::size_t,
                         std::size_t)>
        beta_third;

    std::vector<double> default_start;  // feasible Newton starting point
};

// Prior exponent eta with pi_0(theta) = exp(-eta(theta)). The smoothness tag
// declares which derivatives are valid; requesting beyond it throws.
struct PriorSpec {
    std::string name;
    Smoothness smoothness = Smoothness::C3;

    std::function<double(const std::vector<double>&)> eta;
    std::function<std::vector<double>(const std::vector<double>&)> eta_grad;
    std::function<SymMatrix(const std::vector<double>&)> eta_hess;  // C2+
    std::function<double(const std::vector<double>&, std::size_t, std::size_t,
                         std::size_t)>
        eta_third;  // C3 only

    // sup_theta |eta'| when finite; enables the weak-prior MLE bound without
    // computing the posterior expectation of the gradient.
    std::optional<double> eta_grad_sup;
};

struct DataSummary {
    std::size_t n = 0;
    std::vector<double> t;  // T_u = sum_i h_u(x_i)
    std::map<std::string, double> extras;

    double extra(const std::string& key) const {
        auto it = extras.find(key);
        if (it == extras.end()) throw Error("missing data summary extra: " + key);
        return it->second;
    }
};

// Compensated summation of the sufficient statistics. Stores the documented
// extras "s2_times_n" (sum of (x-m)^2) and "sum_sq" (sum of x^2) when the
// model needs them.
DataSummary summarize(const CanonicalModel& model,
                      const std::vector<std::vector<double>>& data);

// lambda(theta) = n beta(theta) + eta(theta) and its derivative tensors.
// Third order is exposed as a callable rather than a materialized k^3 block.
class Lambda {
public:
    Lambda(const CanonicalModel& model, const PriorSpec& prior, double n)
        : model_(&model), prior_(&prior), n_(n) {}

    double n() const { return n_; }
    std::size_t dim() const { return model_->k; }

    double value(const std::vector<double>& theta) const;
    std::vector<double> grad(const std::vector<double>& theta) const;
    SymMatrix hess(const std::vector<double>& theta) const;

    // Requires a C3 prior.
    double third(const std::vector<double>& theta, std::size_t l, std::size_t u,
                 std::size_t v) const;

    const CanonicalModel& model() const { return *model_; }
    const PriorSpec& prior() const { return *prior_; }

private:
    void require(Smoothness s, const char* what) const;
    const CanonicalModel* model_;
    const PriorSpec* prior_;
    double n_;
};

// ---- builtin families ------------------------------------------------------

CanonicalModel model_bernoulli();
CanonicalModel model_poisson();
CanonicalModel model_normal_precision(double m);
CanonicalModel model_weibull(double shape);
CanonicalModel model_negbin(double r);
CanonicalModel model_multinomial(std::size_t categories);
CanonicalModel model_normal_meanvar();

PriorSpec prior_bernoulli_conjugate(double tau1, double tau2);
PriorSpec prior_bernoulli_hyperbolic();  // improper cosh prior, declared C1
PriorSpec prior_poisson_gamma(double tau1, double tau2);
PriorSpec prior_gamma_exponent(double tau1, double tau2);  // eta = tau1 t - tau2 log t
PriorSpec prior_negbin_conjugate(double tau1, double tau2);
PriorSpec prior_dirichlet(const std::vector<double>& tau);
PriorSpec prior_normal_gamma(double tau1, double tau2, double tau3, double tau4);

struct ModelPrior {
    CanonicalModel model;
    PriorSpec prior;
};

// One catalog entry per CLI model key. `fixed` carries the non-hyperparameter
// constants a family needs (documented in fixed_desc).
struct BuiltinFamily {
    std::string key;
    std::size_t tau_count;  // 0 = variable length (multinomial)
    std::string fixed_desc;
    std::function<ModelPrior(const std::vector<double>& tau,
                             const std::vector<double>& fixed)>
        make;
};

const std::vector<BuiltinFamily>& builtin_families();
const BuiltinFamily& family_by_key(const std::string& key);

}  // namespace bvm
