#include "bvm/verify.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "bvm/bounds.hpp"
#include "bvm/distances.hpp"
#include "bvm/examples.hpp"
#include "bvm/rng.hpp"
#include "bvm/stats.hpp"
#include "bvm/vec.hpp"

namespace bvm {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

// Random SPD matrix with eigenvalues in [0.05, ~5].
SymMatrix random_spd(CounterRng& rng, std::size_t k) {
    SymMatrix g(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) g.at(i, j) = rng.normal();
    SymMatrix a(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l < k; ++l) s += g(i, l) * g(j, l);
            a.at(i, j) = a.at(j, i) = s / double(k);
        }
    for (std::size_t i = 0; i < k; ++i) a.at(i, i) += 0.05;
    return a;
}

struct FdReport {
    double worst = 0.0;
    bool ok = true;
};

// Central-difference consistency of a scalar function against its gradient.
template <class F, class G>
void fd_check(F&& value, G&& grad, const std::vector<double>& theta,
              FdReport& rep) {
    const std::vector<double> g = grad(theta);
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double h = 1e-5 * (1.0 + std::abs(theta[i]));
        std::vector<double> tp = theta, tm = theta;
        tp[i] += h;
        tm[i] -= h;
        const double fd = (value(tp) - value(tm)) / (2.0 * h);
        const double err =
            std::abs(fd - g[i]) / (1.0 + std::abs(g[i]));
        rep.worst = std::max(rep.worst, err);
        if (err > 1e-5) rep.ok = false;
    }
}

std::vector<double> random_point_in_support(const CanonicalModel& model,
                                            CounterRng& rng) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<double> theta(model.k);
        for (std::size_t i = 0; i < model.k; ++i)
            theta[i] = model.default_start[i] + 0.6 * rng.normal();
        if (model.name == "normal-precision" || model.name == "weibull")
            theta[0] = std::abs(theta[0]) + 0.05;
        if (model.name == "negbin") theta[0] = -std::abs(theta[0]) - 0.05;
        if (model.name == "normal-meanvar") theta[1] = std::abs(theta[1]) + 0.05;
        if (model.param_in_support(theta)) return theta;
    }
    throw Error("could not draw a point in the model support");
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<CheckResult> verify_linalg(std::uint64_t seed) {
    std::vector<CheckResult> out;
    CounterRng rng(seed, 31);

    double worst_chain = 0.0, worst_chain2 = 0.0;
    std::size_t violations = 0;
    for (std::size_t k = 1; k <= 8; ++k) {
        for (int rep = 0; rep < 1000; ++rep) {
            const SymMatrix m = random_spd(rng, k);
            const SpdFactorization f = spd_sqrt(m);
            const RowSumScalars rs = row_sum_scalars(f.inv_sqrt);
            const MatrixNorms norms = matrix_norms(f.inv_sqrt);
            const double cap = std::sqrt(double(k) / f.lambda_min);
            const double lower = 1.0 / std::sqrt(f.lambda_min);
            for (std::size_t u = 0; u < k; ++u) {
                const double a = rs.r[u] - rs.r_tilde[u];
                const double b = rs.r_tilde[u] - norms.inf_norm;
                worst_chain = std::max(worst_chain, std::max(a, b));
                if (a > 1e-9 || b > 1e-9) ++violations;
            }
            const double c = norms.inf_norm - cap;
            const double d = lower - norms.inf_norm;
            worst_chain2 = std::max(worst_chain2, std::max(c, d));
            if (c > 1e-9 || d > 1e-9) ++violations;
        }
    }
    out.push_back({"linalg/row-sum-inequality-chain", violations == 0,
                   fmt("worst slack %.3g / %.3g over 8000 matrices", worst_chain,
                       worst_chain2)});

    double worst_recon = 0.0, worst_inv = 0.0, worst_eig = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t k = 1 + rng.next_u64() % 8;
        const SymMatrix m = random_spd(rng, k);
        const SpdFactorization f = spd_sqrt(m);
        const SymMatrix back = f.sqrt.mul(f.sqrt);
        const SymMatrix ident = f.inv_sqrt.mul(m).mul(f.inv_sqrt);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                worst_recon = std::max(
                    worst_recon, std::abs(back(i, j) - m(i, j)) / m.max_abs());
                worst_inv = std::max(
                    worst_inv, std::abs(ident(i, j) - (i == j ? 1.0 : 0.0)));
            }
        // eigenvalues of M^{-1/2} are lambda_i^{-1/2} of M
        const EigenDecomposition ed = eigen_sym(f.inv_sqrt);
        for (std::size_t i = 0; i < k; ++i) {
            const double expected = 1.0 / std::sqrt(f.eigenvalues[k - 1 - i]);
            worst_eig =
                std::max(worst_eig, std::abs(ed.eigenvalues[i] - expected));
        }
    }
    out.push_back({"linalg/sqrt-multiply-back", worst_recon <= 1e-9,
                   fmt("max relative error %.3g", worst_recon)});
    out.push_back({"linalg/inv-sqrt-whitening", worst_inv <= 1e-9,
                   fmt("max identity error %.3g", worst_inv)});
    out.push_back({"linalg/inv-sqrt-eigenvalues", worst_eig <= 1e-9,
                   fmt("max eigenvalue error %.3g", worst_eig)});
    return out;
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> verify_derivs(std::uint64_t seed) {
    std::vector<CheckResult> out;
    CounterRng rng(seed, 37);

    const std::vector<ExampleConfig> configs = {
        {Family::Bernoulli, {2.0, 3.0}, {}, {}},
        {Family::Poisson, {1.0, 3.0}, {}, {}},
        {Family::NormalPrecision, {2.0, 0.5}, {0.0}, {}},
        {Family::Weibull, {1.0, 1.0}, {2.0}, {}},
        {Family::NegBin, {1.0, 1.0}, {2.0}, {}},
        {Family::Multinomial, {0.2, 0.2, 1.5}, {}, {}},
        {Family::NormalMeanVar, {1.0, 0.5, 0.5, 1.0}, {}, {}},
    };

    for (const ExampleConfig& cfg : configs) {
        const ExampleSpec ex(cfg);
        const ModelPrior mp = ex.model_prior();
        FdReport grad_rep, hess_rep, third_rep;
        double worst_sym = 0.0;
        for (int pt = 0; pt < 100; ++pt) {
            const std::vector<double> theta =
                random_point_in_support(mp.model, rng);
            fd_check(mp.model.beta, mp.model.beta_grad, theta, grad_rep);
            fd_check(mp.prior.eta, mp.prior.eta_grad, theta, grad_rep);
            // hessian columns against gradient differences
            for (std::size_t j = 0; j < mp.model.k; ++j) {
                const double h = 1e-5 * (1.0 + std::abs(theta[j]));
                std::vector<double> tp = theta, tm = theta;
                tp[j] += h;
                tm[j] -= h;
                const std::vector<double> gp = mp.model.beta_grad(tp);
                const std::vector<double> gm = mp.model.beta_grad(tm);
                const SymMatrix bh = mp.model.beta_hess(theta);
                for (std::size_t i = 0; i < mp.model.k; ++i) {
                    const double fd = (gp[i] - gm[i]) / (2.0 * h);
                    const double err =
                        std::abs(fd - bh(i, j)) / (1.0 + std::abs(bh(i, j)));
                    hess_rep.worst = std::max(hess_rep.worst, err);
                    if (err > 1e-5) hess_rep.ok = false;
                }
                // third derivatives against hessian differences
                const SymMatrix hp = mp.model.beta_hess(tp);
                const SymMatrix hm = mp.model.beta_hess(tm);
                for (std::size_t l = 0; l < mp.model.k; ++l)
                    for (std::size_t u = 0; u < mp.model.k; ++u) {
                        const double fd = (hp(l, u) - hm(l, u)) / (2.0 * h);
                        const double an = mp.model.beta_third(theta, l, u, j);
                        const double err =
                            std::abs(fd - an) / (1.0 + std::abs(an));
                        third_rep.worst = std::max(third_rep.worst, err);
                        if (err > 1e-5) third_rep.ok = false;
                    }
            }
            // permutation symmetry on random triples
            for (int t = 0; t < 5; ++t) {
                const std::size_t l = rng.next_u64() % mp.model.k;
                const std::size_t u = rng.next_u64() % mp.model.k;
                const std::size_t v = rng.next_u64() % mp.model.k;
                const double ref = mp.model.beta_third(theta, l, u, v);
                worst_sym = std::max(
                    worst_sym,
                    std::abs(ref - mp.model.beta_third(theta, v, l, u)));
                worst_sym = std::max(
                    worst_sym,
                    std::abs(ref - mp.model.beta_third(theta, u, v, l)));
            }
        }
        const std::string key = ex.key();
        out.push_back({"derivs/" + key + "/gradient", grad_rep.ok,
                       fmt("worst fd error %.3g", grad_rep.worst)});
        out.push_back({"derivs/" + key + "/hessian", hess_rep.ok,
                       fmt("worst fd error %.3g", hess_rep.worst)});
        out.push_back({"derivs/" + key + "/third+symmetry",
                       third_rep.ok && worst_sym <= 1e-12,
                       fmt("fd %.3g, symmetry %.3g", third_rep.worst, worst_sym)});
    }

    // conjugacy: theta.T - n beta - eta equals the updated-prior exponent up
    // to a constant, checked on a grid
    {
        const ExampleSpec ex({Family::Bernoulli, {2.0, 3.0}, {}, {0.4}});
        const ModelPrior mp = ex.model_prior();
        CounterRng drng(seed, 41);
        std::vector<std::vector<double>> data;
        ex.sample_data(drng, 25, data);
        const DataSummary s = summarize(mp.model, data);
        const PriorSpec updated =
            prior_bernoulli_conjugate(2.0 + s.t[0], 3.0 + double(s.n));
        double worst = 0.0;
        double ref = 0.0;
        for (int i = 0; i <= 20; ++i) {
            const std::vector<double> theta{-3.0 + 0.3 * i};
            const double lhs = theta[0] * s.t[0] -
                               double(s.n) * mp.model.beta(theta) -
                               mp.prior.eta(theta);
            const double rhs = -updated.eta(theta);
            if (i == 0) ref = lhs - rhs;
            worst = std::max(worst, std::abs((lhs - rhs) - ref));
        }
        out.push_back({"derivs/bernoulli-beta/conjugate-update", worst <= 1e-9,
                       fmt("exponent drift %.3g", worst)});
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> verify_bounds(std::uint64_t seed) {
    std::vector<CheckResult> out;

    // generic multivariate path vs the independent univariate path at k = 1
    {
        const ExampleSpec ex({Family::NormalPrecision, {2.0, 0.5}, {0.0}, {3.0}});
        const ModelPrior mp = ex.model_prior();
        CounterRng rng(seed, 43);
        std::vector<std::vector<double>> data;
        ex.sample_data(rng, 100, data);
        const DataSummary s = summarize(mp.model, data);
        const PosteriorContext ctx = build_context(mp.model, mp.prior, s);
        const std::unique_ptr<PosteriorDist> post = ex.exact_posterior(s);
        EngineOptions opts;
        opts.expect.seed = seed;
        const auto [tv, wass] = bound_mode_tv_wass(ctx, *post, opts);
        const BoundReport uniw =
            bound_mode_univariate(ctx, *post, UniVariant::Wass, 0.0, opts);
        const double diff = std::abs(wass.value - uniw.value) /
                            std::max(1e-300, std::abs(uniw.value));
        out.push_back({"bounds/univariate-vs-generic-wass", diff <= 1e-9,
                       fmt("relative difference %.3g", diff)});
        const double ratio = tv.value / wass.value;
        const double expected = std::sqrt(8.0 * M_PI) / 3.0;
        out.push_back({"bounds/tv-wass-ratio",
                       std::abs(ratio - expected) <= 1e-12,
                       fmt("ratio %.15g vs sqrt(8pi)/3", ratio)});
        const double exact = std::sqrt(2.0) / std::sqrt(100.0 + 2.0 * 0.5);
        const double wdiff = std::abs(uniw.value - exact) / exact;
        out.push_back({"bounds/gamma-wass-exactness", wdiff <= 1e-6,
                       fmt("univariate bound off closed form by %.3g", wdiff)});
    }

    // a cubic-free lambda gives a vanishing Delta: normal location model with
    // a normal prior, both quadratic in theta
    {
        CanonicalModel m;
        m.name = "normal-location";
        m.k = m.d = 1;
        m.suff_stat = [](const std::vector<double>& x) {
            return std::vector<double>{x[0]};
        };
        m.carrier = [](const std::vector<double>& x) {
            return 0.5 * x[0] * x[0] + 0.5 * std::log(2.0 * M_PI);
        };
        m.obs_in_support = [](const std::vector<double>&) { return true; };
        m.param_in_support = [](const std::vector<double>&) { return true; };
        m.beta = [](const std::vector<double>& t) { return 0.5 * t[0] * t[0]; };
        m.beta_grad = [](const std::vector<double>& t) {
            return std::vector<double>{t[0]};
        };
        m.beta_hess = [](const std::vector<double>&) {
            return SymMatrix::diagonal({1.0});
        };
        m.beta_third = [](const std::vector<double>&, std::size_t, std::size_t,
                          std::size_t) { return 0.0; };
        m.default_start = {0.0};

        PriorSpec p;
        p.name = "normal";
        p.smoothness = Smoothness::C3;
        p.eta = [](const std::vector<double>& t) { return 0.5 * t[0] * t[0]; };
        p.eta_grad = [](const std::vector<double>& t) {
            return std::vector<double>{t[0]};
        };
        p.eta_hess = [](const std::vector<double>&) {
            return SymMatrix::diagonal({1.0});
        };
        p.eta_third = [](const std::vector<double>&, std::size_t, std::size_t,
                         std::size_t) { return 0.0; };

        std::vector<std::vector<double>> data;
        CounterRng rng(seed, 47);
        for (int i = 0; i < 40; ++i) data.push_back({rng.normal()});
        const DataSummary s = summarize(m, data);
        const PosteriorContext ctx = build_context(m, p, s);
        const std::unique_ptr<PosteriorDist> post = make_numeric_posterior(ctx);
        EngineOptions opts;
        opts.expect.seed = seed;
        const auto [tv, wass] = bound_mode_tv_wass(ctx, *post, opts);
        out.push_back({"bounds/cubic-free-lambda-zero",
                       tv.value == 0.0 && wass.value == 0.0,
                       fmt("tv %.3g wass %.3g", tv.value, wass.value)});
    }

    // quick upper-bound validity spot check (fig1c closed bounds vs oracles)
    {
        SweepConfig cfg;
        cfg.example = preset_by_name("fig1c-normal").config;
        cfg.n_grid = {100};
        cfg.seed = seed;
        const SweepResult res = run_sweep(cfg);
        bool ok = true;
        double worst = 0.0;
        for (const SweepRow& r : res.rows) {
            const double slack = r.bound - r.oracle;
            worst = std::min(worst, slack);
            if (slack < -3.0 * (r.bound_se + r.oracle_se)) ok = false;
        }
        out.push_back({"bounds/fig1c-upper-bound-validity", ok,
                       fmt("worst slack %.3g", worst)});
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> verify_oracles(std::uint64_t seed) {
    std::vector<CheckResult> out;

    // gamma vs matched normal: the exact formula 1/rate
    {
        double worst = 0.0;
        for (const auto& [alpha, rate] :
             std::vector<std::pair<double, double>>{{2.0, 1.0}, {10.0, 2.0},
                                                    {51.5, 12.0}}) {
            const std::unique_ptr<PosteriorDist> g =
                make_gamma_posterior(alpha, rate);
            const double mu = (alpha - 1.0) / rate;
            const double sd = std::sqrt(alpha - 1.0) / rate;
            const auto win = g->window()[0];
            const std::array<double, 2> window{
                std::min(win[0], mu - 10.0 * sd), std::max(win[1], mu + 10.0 * sd)};
            const DistanceEstimate w = wass_1d(
                [&](double x) { return g->cdf(x); },
                [&](double x) { return normal_cdf((x - mu) / sd); }, window);
            const double rel = std::abs(w.value - 1.0 / rate) * rate;
            worst = std::max(worst, rel);
        }
        out.push_back({"oracles/gamma-normal-exact-wasserstein", worst <= 1e-3,
                       fmt("worst relative error %.3g", worst)});
    }

    // unit normal against shifted/scaled normals: analytic values
    {
        const std::array<double, 2> window{-14.0, 14.0};
        const DistanceEstimate w =
            wass_1d(normal_cdf, [](double x) { return normal_cdf(x - 1.0); },
                    window);
        const DistanceEstimate t =
            tv_1d(normal_pdf, [](double x) { return normal_pdf(x - 1.0); },
                  window);
        const DistanceEstimate k =
            kolmogorov_1d(normal_cdf,
                          [](double x) { return normal_cdf(x - 1.0); }, window);
        const DistanceEstimate ws =
            wass_1d(normal_cdf, [](double x) { return normal_cdf(x / 2.0); },
                    window);
        const double tv_exact = 2.0 * normal_cdf(0.5) - 1.0;
        const double kol_exact = normal_cdf(0.5) - normal_cdf(-0.5);
        const double wass_scale_exact = std::sqrt(2.0 / M_PI);
        const bool ok = std::abs(w.value - 1.0) < 1e-6 &&
                        std::abs(t.value - tv_exact) < 1e-6 &&
                        std::abs(k.value - kol_exact) < 1e-6 &&
                        std::abs(ws.value - wass_scale_exact) < 1e-6 &&
                        k.value <= t.value + 1e-9;
        out.push_back(
            {"oracles/normal-shift-analytic", ok,
             fmt("wass err %.3g tv err %.3g", std::abs(w.value - 1.0),
                 std::abs(t.value - tv_exact))});
    }

    // empirical W1: point masses, self-distance decay, 1-D cross-check
    {
        PointSampler at_origin = [](CounterRng&, std::vector<double>& x) {
            x.assign({0.0, 0.0});
        };
        PointSampler at_34 = [](CounterRng&, std::vector<double>& x) {
            x.assign({3.0, 4.0});
        };
        const DistanceEstimate point =
            wass_empirical(at_origin, at_34, 2, 16, 2, seed);
        PointSampler std2d = [](CounterRng& rng, std::vector<double>& x) {
            x.assign({rng.normal(), rng.normal()});
        };
        const DistanceEstimate self =
            wass_empirical(std2d, std2d, 2, 500, 6, seed + 1);
        const std::unique_ptr<PosteriorDist> g = make_gamma_posterior(10.0, 2.0);
        PointSampler gamma_std = [&](CounterRng& rng, std::vector<double>& x) {
            std::vector<double> th;
            g->sample(rng, th);
            x.assign({(th[0] - 4.5) / std::sqrt(9.0 / 4.0) * 1.5});
        };
        // standardized Gamma(10, 2): mean 5, mode 4.5, sd 1.5; compare with
        // the curvature-matched normal via the 1-D oracle
        PointSampler matched = [](CounterRng& rng, std::vector<double>& x) {
            x.assign({rng.normal()});
        };
        const DistanceEstimate emp =
            wass_empirical(gamma_std, matched, 1, 500, 20, seed + 2);
        const auto win = g->window()[0];
        const DistanceEstimate oracle = wass_1d(
            [&](double w) { return g->cdf(4.5 + 1.5 * w); },
            [](double w) { return normal_cdf(w); },
            {std::min((win[0] - 4.5) / 1.5, -10.0),
             std::max((win[1] - 4.5) / 1.5, 10.0)});
        const bool ok = std::abs(point.value - 5.0) < 1e-12 &&
                        self.value < 0.15 &&
                        std::abs(emp.value - oracle.value) <
                            3.0 * std::max(emp.error_bar, 1e-3) + 0.05 &&
                        emp.value >= oracle.value - emp.error_bar;
        out.push_back({"oracles/empirical-w1", ok,
                       fmt("self %.3g, emp-vs-quad %.3g", self.value,
                           std::abs(emp.value - oracle.value))});
    }
    return out;
}

std::vector<CheckResult> verify_all(std::uint64_t seed) {
    std::vector<CheckResult> out;
    for (auto&& suite : {verify_linalg(seed), verify_derivs(seed),
                         verify_bounds(seed), verify_oracles(seed)})
        out.insert(out.end(), suite.begin(), suite.end());
    return out;
}

std::string format_verify_report(const std::vector<CheckResult>& checks) {
    std::ostringstream os;
    std::size_t passed = 0;
    for (const CheckResult& c : checks) {
        os << (c.pass ? "PASS" : "FAIL") << " " << c.name;
        if (!c.details.empty()) os << " - " << c.details;
        os << "\n";
        if (c.pass) ++passed;
    }
    os << passed << "/" << checks.size() << " checks passed\n";
    return os.str();
}

bool all_pass(const std::vector<CheckResult>& checks) {
    for (const CheckResult& c : checks)
        if (!c.pass) return false;
    return true;
}

}  // namespace bvm
