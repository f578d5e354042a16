#include "bvm/solvers.hpp"

#include <cmath>
#include <functional>

#include "bvm/vec.hpp"

namespace bvm {

namespace {

// Minimizes f with gradient g and Hessian h over the open support. The
// objective is lambda(theta) - <theta, T> (or the n*beta analogue), whose
// stationary point is the mode/MLE by Fact 1a/1b.
struct Objective {
    std::function<double(const std::vector<double>&)> f;
    std::function<std::vector<double>(const std::vector<double>&)> g;
    std::function<SymMatrix(const std::vector<double>&)> h;
    std::function<bool(const std::vector<double>&)> in_support;
};

NewtonResult damped_newton(const Objective& obj, std::vector<double> x,
                           double tol, int max_iter, double residual_scale) {
    if (!obj.in_support(x))
        throw LeftSupport("initial point outside the parameter space");

    NewtonResult out;
    double fx = obj.f(x);
    for (int it = 0; it < max_iter; ++it) {
        std::vector<double> grad = obj.g(x);
        const double res = inf_norm(grad);
        out.residual_history.push_back(res);
        if (res <= tol) {
            out.point = x;
            out.iterations = it;
            out.hessian = spd_sqrt(obj.h(x));
            return out;
        }

        // Newton direction when the Hessian is PD, else steepest descent
        // scaled to a comparable magnitude.
        std::vector<double> dir(x.size());
        bool newton_step = true;
        try {
            SpdFactorization f = spd_sqrt(obj.h(x));
            std::vector<double> tmp = f.inv_sqrt.mul(grad);
            tmp = f.inv_sqrt.mul(tmp);
            for (std::size_t i = 0; i < dir.size(); ++i) dir[i] = -tmp[i];
        } catch (const NotPositiveDefinite&) {
            newton_step = false;
            const double scale = 1.0 / std::max(1.0, res);
            for (std::size_t i = 0; i < dir.size(); ++i) dir[i] = -grad[i] * scale;
        }

        const double slope = dot(grad, dir);
        double t = 1.0;
        bool moved = false;
        bool support_blocked = false;
        for (int half = 0; half < 60; ++half) {
            std::vector<double> cand = add_scaled(x, t, dir);
            if (!obj.in_support(cand) || !all_finite(cand)) {
                support_blocked = true;
                t *= 0.5;
                continue;
            }
            const double fc = obj.f(cand);
            if (std::isfinite(fc) && fc <= fx + 1e-4 * t * slope) {
                x = std::move(cand);
                fx = fc;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if (!moved) {
            if (support_blocked && !newton_step)
                throw LeftSupport("no feasible descent step inside the support");
            throw NonConvergence("Newton line search stalled", it, res);
        }
    }
    const double res = inf_norm(obj.g(x));
    throw NonConvergence("Newton iteration limit", max_iter, res / residual_scale);
}

double default_tol(const DataSummary& summary) {
    return 1e-10 * (1.0 + inf_norm(summary.t));
}

}  // namespace

NewtonResult find_mode(const CanonicalModel& model, const PriorSpec& prior,
                       const DataSummary& summary, const NewtonOptions& opts) {
    const Lambda lam(model, prior, double(summary.n));
    Objective obj;
    obj.f = [&](const std::vector<double>& t) {
        return lam.value(t) - dot(t, summary.t);
    };
    obj.g = [&](const std::vector<double>& t) {
        std::vector<double> g = lam.grad(t);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] -= summary.t[i];
        return g;
    };
    obj.h = [&](const std::vector<double>& t) { return lam.hess(t); };
    obj.in_support = model.param_in_support;

    const double tol = opts.tol > 0.0 ? opts.tol : default_tol(summary);
    std::vector<double> init = opts.init.value_or(model.default_start);
    return damped_newton(obj, std::move(init), tol, opts.max_iterations,
                         1.0 + inf_norm(summary.t));
}

NewtonResult find_mle(const CanonicalModel& model, const DataSummary& summary,
                      const NewtonOptions& opts) {
    const double n = double(summary.n);
    Objective obj;
    obj.f = [&](const std::vector<double>& t) {
        return n * model.beta(t) - dot(t, summary.t);
    };
    obj.g = [&](const std::vector<double>& t) {
        std::vector<double> g = model.beta_grad(t);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = n * g[i] - summary.t[i];
        return g;
    };
    obj.h = [&](const std::vector<double>& t) {
        SymMatrix h = model.beta_hess(t);
        SymMatrix out(h.dim());
        for (std::size_t i = 0; i < h.dim(); ++i)
            for (std::size_t j = 0; j < h.dim(); ++j) out.at(i, j) = n * h(i, j);
        return out;
    };
    obj.in_support = model.param_in_support;

    const double tol = opts.tol > 0.0 ? opts.tol : default_tol(summary);
    std::vector<double> init = opts.init.value_or(model.default_start);
    NewtonResult res = damped_newton(obj, std::move(init), tol,
                                     opts.max_iterations, 1.0 + inf_norm(summary.t));
    // report the factorization of H_beta itself, not n * H_beta
    res.hessian = spd_sqrt(model.beta_hess(res.point));
    return res;
}

PosteriorContext build_context(const CanonicalModel& model, const PriorSpec& prior,
                               const DataSummary& summary,
                               const ContextOptions& opts) {
    PosteriorContext ctx{model, prior, summary,
                         std::nullopt, std::nullopt,
                         std::nullopt, std::nullopt, {}};
    ctx.flags.lambda_third_exists = prior.smoothness == Smoothness::C3;
    ctx.flags.beta_third_eta_grad = static_cast<bool>(model.beta_third) &&
                                    static_cast<bool>(prior.eta_grad);

    if (opts.need_mode && prior.smoothness != Smoothness::C1) {
        NewtonResult mode = find_mode(model, prior, summary, opts.newton);
        ctx.flags.mode_unique_interior = true;
        ctx.flags.mode_residual = mode.residual_history.back();
        ctx.flags.hess_lambda_pd = true;
        ctx.flags.lambda_min_mode = mode.hessian.lambda_min;
        ctx.mode_opt = std::move(mode.point);
        ctx.hess_lambda_opt = std::move(mode.hessian);
    }

    if (opts.need_mle) {
        NewtonResult mle = find_mle(model, summary, opts.newton);
        ctx.flags.mle_unique_interior = true;
        ctx.flags.mle_residual = mle.residual_history.back();
        ctx.flags.hess_beta_pd = true;
        ctx.flags.lambda_min_mle = mle.hessian.lambda_min;
        ctx.mle_opt = std::move(mle.point);
        ctx.hess_beta_opt = std::move(mle.hessian);
    }
    return ctx;
}

AssumptionFlags check_assumptions(const PosteriorContext& ctx, AssumptionSet which) {
    AssumptionFlags f = ctx.flags;
    switch (which) {
        case AssumptionSet::Mode:
            f.lambda_third_exists = ctx.prior.smoothness == Smoothness::C3;
            f.mode_unique_interior = ctx.mode_opt.has_value() && f.mode_unique_interior;
            break;
        case AssumptionSet::Mle:
            f.lambda_third_exists = ctx.prior.smoothness == Smoothness::C3;
            f.mle_unique_interior = ctx.mle_opt.has_value() && f.mle_unique_interior;
            break;
        case AssumptionSet::WeakPrior:
            // beta''' always exists for the builtins; eta' is part of every
            // PriorSpec, so the weak assumption reduces to the MLE checks.
            f.beta_third_eta_grad = static_cast<bool>(ctx.model.beta_third) &&
                                    static_cast<bool>(ctx.prior.eta_grad);
            f.mle_unique_interior = ctx.mle_opt.has_value() && f.mle_unique_interior;
            break;
    }
    return f;
}

}  // namespace bvm
