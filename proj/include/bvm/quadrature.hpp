#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace bvm {

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
// on P_n. Exact enough (1e-15) for the panel sizes used here.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int n);

    // Integrate f over [a, b] with a single panel.
    template <class F>
    double integrate(F&& f, double a, double b) const {
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            s += weights[i] * f(c + h * nodes[i]);
        return s * h;
    }
};

// Flattened tensor rule for the double integral
//   I(g) = int_0^1 int_0^1 y2 * g(y1*y2) dy1 dy2
// appearing in every Upsilon kernel: G x G Gauss-Legendre nodes on [0,1]^2,
// stored as (t, weight) pairs with t = y1*y2.
struct UpsilonRule {
    std::vector<double> t;
    std::vector<double> w;

    explicit UpsilonRule(int g);

    template <class F>
    double apply(F&& g) const {
        double s = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) s += w[i] * g(t[i]);
        return s;
    }
};

// Adaptive 1-D quadrature (Gauss-Kronrod 15 behind the interface).
// Returns the integral estimate; *err_out, when given, receives the
// reported error estimate.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double* err_out = nullptr,
                          double rel_tol = 1e-10);

}  // namespace bvm
