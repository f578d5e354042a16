#pragma once

#include <cmath>
#include <vector>

namespace bvm {

inline double normal_pdf(double x) {
    return 0.3989422804014326779399461 * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244008444);
}

// Standard normal density on R^k.
inline double std_normal_pdf_k(const std::vector<double>& w) {
    double q = 0.0;
    for (double v : w) q += v * v;
    const double c = std::pow(2.0 * M_PI, -0.5 * double(w.size()));
    return c * std::exp(-0.5 * q);
}

// r-th absolute moment of N(0,1): mu_r = 2^{r/2} Gamma((r+1)/2) / sqrt(pi).
inline double normal_abs_moment(double r) {
    return std::pow(2.0, 0.5 * r) * std::tgamma(0.5 * (r + 1.0)) /
           std::sqrt(M_PI);
}

}  // namespace bvm
