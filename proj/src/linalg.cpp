#include "bvm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bvm {

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, 0.0) {
    if (dim == 0) throw DimensionMismatch("SymMatrix dimension must be >= 1");
}

SymMatrix::SymMatrix(std::size_t dim, const std::vector<double>& row_major)
    : dim_(dim), a_(row_major) {
    if (dim == 0) throw DimensionMismatch("SymMatrix dimension must be >= 1");
    if (row_major.size() != dim * dim)
        throw DimensionMismatch("SymMatrix entry count does not match dimension");
    double scale = 0.0;
    for (double v : a_) {
        if (!std::isfinite(v)) throw Error("SymMatrix entries must be finite");
        scale = std::max(scale, std::abs(v));
    }
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i + 1; j < dim_; ++j) {
            const double d = std::abs(a_[i * dim_ + j] - a_[j * dim_ + i]);
            if (d > 1e-12 * std::max(scale, 1e-300))
                throw Error("SymMatrix input asymmetric beyond 1e-12 relative");
            const double m = 0.5 * (a_[i * dim_ + j] + a_[j * dim_ + i]);
            a_[i * dim_ + j] = a_[j * dim_ + i] = m;
        }
}

SymMatrix SymMatrix::identity(std::size_t dim) {
    SymMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& d) {
    SymMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
    return m;
}

std::vector<double> SymMatrix::mul(const std::vector<double>& x) const {
    std::vector<double> y(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) s += a_[i * dim_ + j] * x[j];
        y[i] = s;
    }
    return y;
}

SymMatrix SymMatrix::mul(const SymMatrix& other) const {
    SymMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l < dim_; ++l) s += (*this)(i, l) * other(l, j);
            out.at(i, j) = s;
        }
    // products of commuting symmetric factors are symmetric up to roundoff
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i + 1; j < dim_; ++j) {
            const double m = 0.5 * (out(i, j) + out(j, i));
            out.at(i, j) = out.at(j, i) = m;
        }
    return out;
}

double SymMatrix::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

EigenDecomposition eigen_sym(const SymMatrix& m) {
    const std::size_t k = m.dim();
    std::vector<double> a(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) a[i * k + j] = m(i, j);
    std::vector<double> v(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) v[i * k + i] = 1.0;

    const double tol = 1e-15 * std::max(m.max_abs(), 1e-300) * static_cast<double>(k);
    const int max_sweeps = 100;
    int sweep = 0;
    double off = 0.0;
    for (; sweep < max_sweeps; ++sweep) {
        off = 0.0;
        for (std::size_t p = 0; p < k; ++p)
            for (std::size_t q = p + 1; q < k; ++q) off += std::abs(a[p * k + q]);
        if (off <= tol) break;
        for (std::size_t p = 0; p < k; ++p) {
            for (std::size_t q = p + 1; q < k; ++q) {
                const double apq = a[p * k + q];
                if (std::abs(apq) <= 1e-300) continue;
                const double app = a[p * k + p];
                const double aqq = a[q * k + q];
                const double tau = (aqq - app) / (2.0 * apq);
                double t;
                if (tau >= 0.0)
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t i = 0; i < k; ++i) {
                    const double aip = a[i * k + p];
                    const double aiq = a[i * k + q];
                    a[i * k + p] = c * aip - s * aiq;
                    a[i * k + q] = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < k; ++j) {
                    const double apj = a[p * k + j];
                    const double aqj = a[q * k + j];
                    a[p * k + j] = c * apj - s * aqj;
                    a[q * k + j] = s * apj + c * aqj;
                }
                for (std::size_t i = 0; i < k; ++i) {
                    const double vip = v[i * k + p];
                    const double viq = v[i * k + q];
                    v[i * k + p] = c * vip - s * viq;
                    v[i * k + q] = s * vip + c * viq;
                }
            }
        }
    }
    if (sweep == max_sweeps)
        throw NonConvergence("Jacobi eigendecomposition", max_sweeps, off);

    EigenDecomposition out;
    out.eigenvalues.resize(k);
    for (std::size_t i = 0; i < k; ++i) out.eigenvalues[i] = a[i * k + i];

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return out.eigenvalues[x] < out.eigenvalues[y];
    });
    std::vector<double> ev(k);
    out.eigenvectors.assign(k * k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        ev[j] = out.eigenvalues[order[j]];
        for (std::size_t i = 0; i < k; ++i)
            out.eigenvectors[i * k + j] = v[i * k + order[j]];
    }
    out.eigenvalues = ev;
    return out;
}

namespace {

SymMatrix assemble(const EigenDecomposition& ed, const std::vector<double>& f) {
    const std::size_t k = ed.eigenvalues.size();
    SymMatrix out(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l < k; ++l)
                s += ed.eigenvectors[i * k + l] * f[l] * ed.eigenvectors[j * k + l];
            out.at(i, j) = s;
            out.at(j, i) = s;
        }
    return out;
}

}  // namespace

SpdFactorization spd_sqrt(const SymMatrix& m) {
    EigenDecomposition ed = eigen_sym(m);
    const double threshold = 1e-12 * m.max_abs();
    const double lambda_min = ed.eigenvalues.front();
    if (!(lambda_min > threshold)) throw NotPositiveDefinite(lambda_min);

    const std::size_t k = m.dim();
    std::vector<double> sq(k), isq(k);
    for (std::size_t i = 0; i < k; ++i) {
        sq[i] = std::sqrt(ed.eigenvalues[i]);
        isq[i] = 1.0 / sq[i];
    }
    return SpdFactorization{m, ed.eigenvalues, ed.eigenvectors,
                            assemble(ed, sq), assemble(ed, isq), lambda_min};
}

RowSumScalars row_sum_scalars(const SymMatrix& inv_sqrt) {
    const std::size_t k = inv_sqrt.dim();
    RowSumScalars out;
    out.r.resize(k);
    out.r_tilde.resize(k);
    for (std::size_t u = 0; u < k; ++u) {
        double s = 0.0, sa = 0.0;
        for (std::size_t v = 0; v < k; ++v) {
            s += inv_sqrt(u, v);
            sa += std::abs(inv_sqrt(u, v));
        }
        out.r[u] = std::abs(s);
        out.r_tilde[u] = sa;
    }
    return out;
}

MatrixNorms matrix_norms(const SymMatrix& m) {
    const std::size_t k = m.dim();
    double inf = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) s += std::abs(m(i, j));
        inf = std::max(inf, s);
    }
    EigenDecomposition ed = eigen_sym(m);
    double spec = 0.0;
    for (double l : ed.eigenvalues) spec = std::max(spec, std::abs(l));
    return MatrixNorms{inf, spec};
}

}  // namespace bvm
