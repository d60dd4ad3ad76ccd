#pragma once

// Test-only linear-algebra oracle for the adequacy-metric latent space.
// Two independent routes to a truncated SVD of a term x sentence matrix:
//   * closed-form eigendecomposition of the 2x2 Gram matrix (2-column case)
//   * power iteration with deflation on the n x n Gram matrix
// Both operate on A^T A, a different route than the library's one-sided
// Jacobi orthogonalization of A itself.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

// Column-major dense matrix: col(j) is a std::vector<double> of length rows.
struct Cols {
    std::size_t rows = 0;
    std::vector<std::vector<double>> cols;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

struct SvdResult {
    std::vector<std::vector<double>> u_cols;  // left singular vectors, length rows each
    std::vector<double> sigma;
};

// Closed-form SVD of an m x 2 matrix via the quadratic formula on the Gram
// matrix eigenvalues.
inline SvdResult svd_two_columns(const Cols& a) {
    const auto& c0 = a.cols[0];
    const auto& c1 = a.cols[1];
    double g00 = dot(c0, c0), g01 = dot(c0, c1), g11 = dot(c1, c1);
    double tr = g00 + g11;
    double det = g00 * g11 - g01 * g01;
    double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    double l1 = (tr + disc) / 2.0, l2 = (tr - disc) / 2.0;

    SvdResult out;
    for (double lambda : {l1, l2}) {
        // Eigenvector of [[g00,g01],[g01,g11]] for eigenvalue lambda.
        double vx, vy;
        if (std::fabs(g01) > 1e-300) {
            vx = g01;
            vy = lambda - g00;
        } else {
            // Diagonal Gram: eigenvectors are the axes.
            if (std::fabs(lambda - g00) <= std::fabs(lambda - g11)) { vx = 1.0; vy = 0.0; }
            else { vx = 0.0; vy = 1.0; }
        }
        double vn = std::sqrt(vx * vx + vy * vy);
        vx /= vn;
        vy /= vn;
        double sigma = std::sqrt(std::max(0.0, lambda));
        std::vector<double> u(a.rows, 0.0);
        if (sigma > 1e-300) {
            for (std::size_t i = 0; i < a.rows; ++i) u[i] = (c0[i] * vx + c1[i] * vy) / sigma;
        }
        out.u_cols.push_back(std::move(u));
        out.sigma.push_back(sigma);
    }
    return out;
}

// Top-r singular triplets via power iteration with deflation on G = A^T A.
inline SvdResult svd_power_iteration(const Cols& a, std::size_t r, std::size_t iters = 20000) {
    std::size_t n = a.cols.size();
    std::vector<std::vector<double>> gram(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) gram[i][j] = dot(a.cols[i], a.cols[j]);

    SvdResult out;
    std::vector<std::vector<double>> found_v;
    for (std::size_t k = 0; k < r && k < n; ++k) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 / std::sqrt(2.0 + static_cast<double>(i + k));
        for (std::size_t it = 0; it < iters; ++it) {
            // Orthogonalize against previously found eigenvectors (deflation).
            for (const auto& prev : found_v) {
                double proj = dot(v, prev);
                for (std::size_t i = 0; i < n; ++i) v[i] -= proj * prev[i];
            }
            std::vector<double> w(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) w[i] += gram[i][j] * v[j];
            double wn = norm(w);
            if (wn < 1e-300) break;
            for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
        }
        for (const auto& prev : found_v) {
            double proj = dot(v, prev);
            for (std::size_t i = 0; i < n; ++i) v[i] -= proj * prev[i];
        }
        double vn = norm(v);
        if (vn < 1e-300) break;
        for (auto& x : v) x /= vn;

        std::vector<double> av(a.rows, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < a.rows; ++i) av[i] += a.cols[j][i] * v[j];
        double sigma = norm(av);
        std::vector<double> u(a.rows, 0.0);
        if (sigma > 1e-300)
            for (std::size_t i = 0; i < a.rows; ++i) u[i] = av[i] / sigma;
        out.sigma.push_back(sigma);
        out.u_cols.push_back(std::move(u));
        found_v.push_back(std::move(v));
    }
    return out;
}

// Latent projection of a term vector q by U_r^T q, then cosine.
inline std::vector<double> project(const SvdResult& svd, const std::vector<double>& q,
                                   std::size_t rank) {
    std::vector<double> out;
    for (std::size_t k = 0; k < rank && k < svd.u_cols.size(); ++k) out.push_back(dot(svd.u_cols[k], q));
    return out;
}

inline double clipped_cosine(const std::vector<double>& x, const std::vector<double>& y) {
    double xy = dot(x, y), xx = dot(x, x), yy = dot(y, y);
    if (xx <= 0.0 || yy <= 0.0) return 0.0;
    if (xy <= 0.0) return 0.0;
    if (xy * xy >= xx * yy) return 1.0;
    return xy / std::sqrt(xx * yy);
}

}  // namespace oracle
