#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bvm/bounds.hpp"
#include "bvm/expfam.hpp"
#include "bvm/posterior.hpp"
#include "bvm/rng.hpp"

namespace bvm {

enum class Family {
    Bernoulli,
    BernoulliHyperbolic,
    Poisson,
    NormalPrecision,
    Weibull,
    NegBin,
    Multinomial,
    NormalMeanVar,
};

struct ExampleConfig {
    Family family = Family::Bernoulli;
    std::vector<double> tau;
    std::vector<double> fixed;        // known mean / shape / r / category count
    std::vector<double> data_params;  // data-generating parameters
};

struct ClosedBound {
    std::string theorem;
    Metric metric;
    StdKind kind;
    double value;
    bool lower = false;  // true for lower bounds on the distance
};

// One worked conjugate example: closed-form mode/MLE, exact posterior law,
// the displayed bound formulas, and a data sampler for simulation sweeps.
class ExampleSpec {
public:
    explicit ExampleSpec(ExampleConfig cfg);

    const ExampleConfig& config() const { return cfg_; }
    std::string key() const;
    std::size_t dim() const;

    ModelPrior model_prior() const;

    std::vector<double> closed_form_mode(const DataSummary& s) const;
    std::vector<double> closed_form_mle(const DataSummary& s) const;

    // H_lambda(mode) or H_beta(mle) assembled from the analytic Hessians at
    // the closed-form center; keeps the fast path independent of the solver.
    Standardization closed_standardization(const DataSummary& s, StdKind kind) const;

    std::unique_ptr<PosteriorDist> exact_posterior(const DataSummary& s) const;

    std::vector<ClosedBound> closed_bounds(const DataSummary& s,
                                           const ExpectOptions& opts = {}) const;

    void sample_data(CounterRng& rng, std::size_t n,
                     std::vector<std::vector<double>>& out) const;

private:
    ExampleConfig cfg_;
};

struct Preset {
    std::string name;
    ExampleConfig config;
};

const std::vector<Preset>& presets();
const Preset& preset_by_name(const std::string& name);

// Exact Wasserstein distance between Gamma(alpha, rate) and the
// mode/curvature-matched normal N((alpha-1)/rate, (alpha-1)/rate^2): 1/rate.
double gamma_normal_exact_wass(double alpha, double rate);

// Smallest eigenvalue of B_3 = H_lambda(mode)/n for the 3-category
// multinomial, by the closed quadratic-root formula.
double multinomial_b3_lambda_min(const DataSummary& s,
                                 const std::vector<double>& tau);

// Smallest eigenvalue of H_lambda(mode) for the normal mean+variance example.
double normal_meanvar_lambda_min(const DataSummary& s,
                                 const std::vector<double>& tau);

}  // namespace bvm
