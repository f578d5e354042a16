#include "bvm/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace bvm {

GaussLegendre::GaussLegendre(int n) {
    nodes.resize(n);
    weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

UpsilonRule::UpsilonRule(int g) {
    GaussLegendre gl(g);
    t.reserve(static_cast<std::size_t>(g) * g);
    w.reserve(static_cast<std::size_t>(g) * g);
    for (int i = 0; i < g; ++i) {
        const double y1 = 0.5 * (1.0 + gl.nodes[i]);
        const double w1 = 0.5 * gl.weights[i];
        for (int j = 0; j < g; ++j) {
            const double y2 = 0.5 * (1.0 + gl.nodes[j]);
            const double w2 = 0.5 * gl.weights[j];
            t.push_back(y1 * y2);
            w.push_back(w1 * w2 * y2);
        }
    }
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double* err_out, double rel_tol) {
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 15, rel_tol, &err);
    if (err_out) *err_out = err;
    return v;
}

}  // namespace bvm
