#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>


namespace mmt {

// Minimal column-major dense matrix, just enough for the latent-space math.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& at(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    double at(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    double* col(std::size_t c) { return data_.data() + c * rows_; }
    const double* col(std::size_t c) const { return data_.data() + c * rows_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

struct Svd {
    Matrix u;                   // rows x rank, orthonormal columns
    std::vector<double> sigma;  // rank values, descending
};

namespace detail {

inline double col_dot(const Matrix& m, std::size_t a, std::size_t b) {
    const double* pa = m.col(a);
    const double* pb = m.col(b);
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += pa[i] * pb[i];
    return s;
}

}  // namespace detail

// Truncated SVD by one-sided Jacobi: rotates column pairs of a working copy
// until all columns are pairwise orthogonal, then reads off singular values
// as column norms. Adequate for the term x sentence matrices used here.
// The returned rank is min(requested, numerical rank).
inline Svd truncated_svd(const Matrix& a, std::size_t rank, std::size_t max_sweeps = 64) {
    Matrix work = a;
    const std::size_t n = work.cols();
    const double eps = 1e-14;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = detail::col_dot(work, p, p);
                double aqq = detail::col_dot(work, q, q);
                double apq = detail::col_dot(work, p, q);
                if (std::fabs(apq) <= eps * std::sqrt(app * aqq)) continue;
                rotated = true;
                double zeta = (aqq - app) / (2.0 * apq);
                double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                           (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                double* cp = work.col(p);
                double* cq = work.col(q);
                for (std::size_t i = 0; i < work.rows(); ++i) {
                    double vp = cp[i], vq = cq[i];
                    cp[i] = c * vp - s * vq;
                    cq[i] = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> norms(n);
    for (std::size_t j = 0; j < n; ++j) norms[j] = std::sqrt(detail::col_dot(work, j, j));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

    double sigma_max = n > 0 ? norms[order[0]] : 0.0;
    double rank_tol = sigma_max * 1e-12;
    std::size_t effective = 0;
    for (std::size_t j = 0; j < n && effective < rank; ++j)
        if (norms[order[j]] > rank_tol) ++effective;

    Svd out;
    out.u = Matrix(work.rows(), effective);
    out.sigma.resize(effective);
    for (std::size_t j = 0; j < effective; ++j) {
        std::size_t src = order[j];
        out.sigma[j] = norms[src];
        const double* cs = work.col(src);
        double* cd = out.u.col(j);
        for (std::size_t i = 0; i < work.rows(); ++i) cd[i] = cs[i] / norms[src];
    }
    return out;
}

}  // namespace mmt
