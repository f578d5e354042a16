#pragma once

#include <optional>
#include <vector>

#include "bvm/expfam.hpp"
#include "bvm/linalg.hpp"

namespace bvm {

struct AssumptionFlags {
    bool identifiable = true;          // (A1), structural for the builtins
    bool mode_unique_interior = false; // (A2)
    bool lambda_third_exists = false;  // (A3)
    bool hess_lambda_pd = false;       // (A4)
    bool mle_unique_interior = false;  // (A2')
    bool hess_beta_pd = false;         // (A4')
    bool beta_third_eta_grad = false;  // (A3+), weak-prior variant
    double mode_residual = 0.0;
    double mle_residual = 0.0;
    double lambda_min_mode = 0.0;
    double lambda_min_mle = 0.0;

    bool mode_ok() const {
        return identifiable && mode_unique_interior && lambda_third_exists &&
               hess_lambda_pd;
    }
    bool mle_ok() const {
        return identifiable && mle_unique_interior && lambda_third_exists &&
               hess_beta_pd;
    }
    bool weak_prior_ok() const {
        return identifiable && mle_unique_interior && beta_third_eta_grad &&
               hess_beta_pd;
    }
};

struct NewtonResult {
    std::vector<double> point;
    SpdFactorization hessian;               // of the objective at the solution
    std::vector<double> residual_history;   // inf-norm gradient residuals
    int iterations = 0;
};

struct NewtonOptions {
    std::optional<std::vector<double>> init;
    double tol = -1.0;  // < 0: use 1e-10 * (1 + ||T||_inf)
    int max_iterations = 200;
};

// Posterior mode: solves grad lambda(theta) = T by damped Newton with
// backtracking; falls back to gradient steps while the Hessian is not PD.
NewtonResult find_mode(const CanonicalModel& model, const PriorSpec& prior,
                       const DataSummary& summary, const NewtonOptions& opts = {});

// MLE: same iteration on n * beta.
NewtonResult find_mle(const CanonicalModel& model, const DataSummary& summary,
                      const NewtonOptions& opts = {});

struct PosteriorContext {
    CanonicalModel model;
    PriorSpec prior;
    DataSummary summary;

    // Absent when the corresponding solve was skipped (e.g. a C1 prior has no
    // usable lambda Hessian, so no mode standardization exists for it).
    std::optional<std::vector<double>> mode_opt;
    std::optional<SpdFactorization> hess_lambda_opt;
    std::optional<std::vector<double>> mle_opt;
    std::optional<SpdFactorization> hess_beta_opt;

    AssumptionFlags flags;

    std::size_t dim() const { return model.k; }
    Lambda lambda() const { return Lambda(model, prior, double(summary.n)); }

    const std::vector<double>& mode() const {
        if (!mode_opt) throw AssumptionFailure("posterior mode unavailable");
        return *mode_opt;
    }
    const SpdFactorization& hess_lambda_at_mode() const {
        if (!hess_lambda_opt) throw AssumptionFailure("H_lambda(mode) unavailable");
        return *hess_lambda_opt;
    }
    const std::vector<double>& mle() const {
        if (!mle_opt) throw AssumptionFailure("MLE unavailable");
        return *mle_opt;
    }
    const SpdFactorization& hess_beta_at_mle() const {
        if (!hess_beta_opt) throw AssumptionFailure("H_beta(MLE) unavailable");
        return *hess_beta_opt;
    }
};

struct ContextOptions {
    bool need_mode = true;  // ignored (treated false) for C1 priors
    bool need_mle = true;
    NewtonOptions newton;
};

PosteriorContext build_context(const CanonicalModel& model, const PriorSpec& prior,
                               const DataSummary& summary,
                               const ContextOptions& opts = {});

enum class AssumptionSet { Mode, Mle, WeakPrior };

// Re-derives the flags for the requested theorem family from the context;
// never throws, callers decide what a failed flag means.
AssumptionFlags check_assumptions(const PosteriorContext& ctx, AssumptionSet which);

}  // namespace bvm
