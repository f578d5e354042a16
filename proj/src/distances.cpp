#include "bvm/distances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bvm/errors.hpp"
#include "bvm/quadrature.hpp"

namespace bvm {

namespace {

constexpr std::size_t kAssignmentLimit = 600;

void check_window_mass(const Cdf1& cdf, std::array<double, 2> w) {
    const double missing = cdf(w[0]) + (1.0 - cdf(w[1]));
    if (missing > 1e-6) throw WindowTooSmall(missing);
}

// Locate sign changes of g on a scan grid and refine them by bisection, so
// the absolute value can be integrated piecewise-smoothly.
std::vector<double> crossing_points(const std::function<double(double)>& g,
                                    double lo, double hi, int scan) {
    std::vector<double> cuts{lo};
    double x_prev = lo, g_prev = g(lo);
    for (int i = 1; i <= scan; ++i) {
        const double x = lo + (hi - lo) * double(i) / scan;
        const double gx = g(x);
        if ((g_prev < 0.0 && gx > 0.0) || (g_prev > 0.0 && gx < 0.0)) {
            double a = x_prev, b = x, ga = g_prev;
            for (int it = 0; it < 60; ++it) {
                const double m = 0.5 * (a + b);
                const double gm = g(m);
                if ((ga < 0.0) == (gm < 0.0)) {
                    a = m;
                    ga = gm;
                } else {
                    b = m;
                }
            }
            cuts.push_back(0.5 * (a + b));
        }
        x_prev = x;
        g_prev = gx;
    }
    cuts.push_back(hi);
    return cuts;
}

DistanceEstimate integrate_abs_diff(const std::function<double(double)>& g,
                                    std::array<double, 2> window,
                                    const std::string& metric, double factor) {
    const std::vector<double> cuts = crossing_points(g, window[0], window[1], 512);
    double total = 0.0, err_total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double err = 0.0;
        total += integrate_adaptive(
            [&](double x) { return std::abs(g(x)); }, cuts[i], cuts[i + 1], &err,
            1e-9);
        err_total += err;
    }
    return {metric, factor * total, factor * err_total, "quad", cuts.size() - 1};
}

}  // namespace

DistanceEstimate wass_1d(const Cdf1& cdf_a, const Cdf1& cdf_b,
                         std::array<double, 2> window) {
    check_window_mass(cdf_a, window);
    check_window_mass(cdf_b, window);
    return integrate_abs_diff([&](double x) { return cdf_a(x) - cdf_b(x); },
                              window, "wass", 1.0);
}

DistanceEstimate tv_1d(const Pdf1& pdf_a, const Pdf1& pdf_b,
                       std::array<double, 2> window) {
    return integrate_abs_diff([&](double x) { return pdf_a(x) - pdf_b(x); },
                              window, "tv", 0.5);
}

DistanceEstimate tv_2d(const Pdf2& pdf_a, const Pdf2& pdf_b,
                       const std::vector<std::array<double, 2>>& box,
                       int nodes_per_axis) {
    if (box.size() != 2) throw DimensionMismatch("tv_2d needs a 2-D box");
    const int g = 10;
    auto run = [&](int nodes) {
        const int panels = std::max(2, std::min(nodes, 200) / g);
        const GaussLegendre gl(g);
        std::vector<double> xs, wx, ys, wy;
        auto fill = [&](const std::array<double, 2>& b, std::vector<double>& n_,
                        std::vector<double>& w_) {
            const double h = (b[1] - b[0]) / panels;
            for (int p = 0; p < panels; ++p)
                for (int i = 0; i < g; ++i) {
                    n_.push_back(b[0] + p * h + 0.5 * h * (1.0 + gl.nodes[i]));
                    w_.push_back(0.5 * h * gl.weights[i]);
                }
        };
        fill(box[0], xs, wx);
        fill(box[1], ys, wy);
        double s = 0.0;
        std::vector<double> pt(2);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            pt[0] = xs[i];
            for (std::size_t j = 0; j < ys.size(); ++j) {
                pt[1] = ys[j];
                s += wx[i] * wy[j] * std::abs(pdf_a(pt) - pdf_b(pt));
            }
        }
        return 0.5 * s;
    };
    const double coarse = run(nodes_per_axis / 2);
    const double fine = run(nodes_per_axis);
    return {"tv", fine, std::abs(fine - coarse), "quad2d",
            std::size_t(nodes_per_axis) * std::size_t(nodes_per_axis)};
}

DistanceEstimate kolmogorov_1d(const Cdf1& cdf_a, const Cdf1& cdf_b,
                               std::array<double, 2> window) {
    auto g = [&](double x) { return std::abs(cdf_a(x) - cdf_b(x)); };
    const int grid = 2048;
    double best = 0.0, best_x = window[0];
    for (int i = 0; i <= grid; ++i) {
        const double x = window[0] + (window[1] - window[0]) * double(i) / grid;
        const double v = g(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    // golden-section refinement inside the bracketing cells
    const double h = (window[1] - window[0]) / grid;
    double a = best_x - h, b = best_x + h;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = g(x1);
        }
    }
    const double refined = std::max(best, std::max(f1, f2));
    return {"kol", refined, refined - best, "grid+golden", grid + 1};
}

double solve_assignment(const std::vector<std::vector<double>>& cost) {
    const int n = int(cost.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j)
                if (!used[j]) {
                    const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if (cur < minv[j]) {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if (minv[j] < delta) {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    double total = 0.0;
    for (int j = 1; j <= n; ++j)
        if (p[j]) total += cost[p[j] - 1][j - 1];
    return total;
}

DistanceEstimate wass_empirical(const PointSampler& a, const PointSampler& b,
                                std::size_t dim, std::size_t m, std::size_t reps,
                                std::uint64_t seed) {
    if (dim > 4) throw DimensionMismatch("empirical W1 limited to dim <= 4");
    if (m > kAssignmentLimit) throw AssignmentOverflow(m);
    if (m < 2 || reps < 1) throw ConfigError("need m >= 2 and reps >= 1");

    std::vector<double> values;
    values.reserve(reps);
    for (std::size_t rep = 0; rep < reps; ++rep) {
        CounterRng rng_a(seed, 2 * rep + 1);
        CounterRng rng_b(seed, 2 * rep + 2);
        std::vector<std::vector<double>> xs(m), ys(m);
        for (std::size_t i = 0; i < m; ++i) {
            a(rng_a, xs[i]);
            b(rng_b, ys[i]);
        }
        std::vector<std::vector<double>> cost(m, std::vector<double>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                double q = 0.0;
                for (std::size_t d = 0; d < dim; ++d) {
                    const double diff = xs[i][d] - ys[j][d];
                    q += diff * diff;
                }
                cost[i][j] = std::sqrt(q);
            }
        values.push_back(solve_assignment(cost) / double(m));
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= double(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double spread =
        values.size() > 1 ? std::sqrt(var / double(values.size() - 1)) : 0.0;
    return {"wass", mean, spread, "assignment", m * reps};
}

}  // namespace bvm
