#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bvm/rng.hpp"

namespace bvm {

struct DistanceEstimate {
    std::string metric;
    double value = 0.0;
    double error_bar = 0.0;  // quadrature refinement diff / spread across reps
    std::string method;
    std::size_t count = 0;  // nodes, or reps * batch
};

using Cdf1 = std::function<double(double)>;
using Pdf1 = std::function<double(double)>;
using Pdf2 = std::function<double(const std::vector<double>&)>;
using PointSampler = std::function<void(CounterRng&, std::vector<double>&)>;

// d_Wass(X, Y) = int |F_a - F_b| over a window that must cover all but 1e-6
// of both distributions' mass (WindowTooSmall otherwise). The integrand is
// split at sign changes of F_a - F_b so each adaptive panel is smooth.
DistanceEstimate wass_1d(const Cdf1& cdf_a, const Cdf1& cdf_b,
                         std::array<double, 2> window);

// d_TV = (1/2) int |p_a - p_b|.
DistanceEstimate tv_1d(const Pdf1& pdf_a, const Pdf1& pdf_b,
                       std::array<double, 2> window);

DistanceEstimate tv_2d(const Pdf2& pdf_a, const Pdf2& pdf_b,
                       const std::vector<std::array<double, 2>>& box,
                       int nodes_per_axis = 200);

// sup_z |F_a - F_b| by grid scan plus golden-section refinement; never below
// the grid maximum.
DistanceEstimate kolmogorov_1d(const Cdf1& cdf_a, const Cdf1& cdf_b,
                               std::array<double, 2> window);

// Empirical W1 via exact assignment on m-point batches, averaged over
// repetitions; error_bar is the sample std across repetitions. Positively
// biased: an estimate, not an oracle.
DistanceEstimate wass_empirical(const PointSampler& a, const PointSampler& b,
                                std::size_t dim, std::size_t m, std::size_t reps,
                                std::uint64_t seed);

// Exact square assignment (Kuhn-Munkres with potentials); returns the total
// cost of the optimal matching.
double solve_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace bvm
