#pragma once

#include <cstddef>
#include <vector>

#include "bvm/errors.hpp"

namespace bvm {

// Dense symmetric matrix for small dimensions (k <= 8 in practice).
// The constructor symmetrizes by averaging (M + M^T)/2 and rejects inputs
// whose asymmetry exceeds 1e-12 relative to the largest entry.
class SymMatrix {
public:
    explicit SymMatrix(std::size_t dim);
    SymMatrix(std::size_t dim, const std::vector<double>& row_major);

    static SymMatrix identity(std::size_t dim);
    static SymMatrix diagonal(const std::vector<double>& d);

    std::size_t dim() const { return dim_; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
    double& at(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }

    std::vector<double> mul(const std::vector<double>& x) const;
    SymMatrix mul(const SymMatrix& other) const;  // result symmetrized

    double max_abs() const;

private:
    std::size_t dim_;
    std::vector<double> a_;
};

struct EigenDecomposition {
    std::vector<double> eigenvalues;   // ascending
    std::vector<double> eigenvectors;  // column j is the j-th eigenvector, row-major k x k
};

// Cyclic Jacobi rotations. Throws NonConvergence if the off-diagonal norm
// fails to fall below tolerance within 100 sweeps.
EigenDecomposition eigen_sym(const SymMatrix& m);

struct SpdFactorization {
    SymMatrix source;
    std::vector<double> eigenvalues;   // ascending, all > 0
    std::vector<double> eigenvectors;  // as in EigenDecomposition
    SymMatrix sqrt;
    SymMatrix inv_sqrt;
    double lambda_min;
};

// Unique positive definite square root via the eigendecomposition.
// Throws NotPositiveDefinite (carrying lambda_min) when any eigenvalue is
// at or below 1e-12 * ||M||_inf; that threshold separates genuine
// assumption failure from roundoff.
SpdFactorization spd_sqrt(const SymMatrix& m);

struct RowSumScalars {
    std::vector<double> r;        // R_u = |sum_v m_{u,v}|
    std::vector<double> r_tilde;  // R~_u = sum_v |m_{u,v}|
};

// Row-sum scalars of an inverse square root matrix.
RowSumScalars row_sum_scalars(const SymMatrix& inv_sqrt);

struct MatrixNorms {
    double inf_norm;       // max absolute row sum
    double spectral_norm;  // max |eigenvalue|
};

MatrixNorms matrix_norms(const SymMatrix& m);

}  // namespace bvm
