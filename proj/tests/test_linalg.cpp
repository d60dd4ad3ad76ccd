#include <doctest.h>

#include <cmath>

#include <mmt/linalg.hpp>
#include <mmt/rng.hpp>

#include "oracles/tiny_svd.hpp"

namespace {

oracle::Cols to_oracle(const mmt::Matrix& m) {
    oracle::Cols out;
    out.rows = m.rows();
    for (std::size_t j = 0; j < m.cols(); ++j)
        out.cols.emplace_back(m.col(j), m.col(j) + m.rows());
    return out;
}

}  // namespace

TEST_CASE("singular values of random 2-column matrices match the closed form") {
    mmt::SmallRng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t rows = 2 + rng.below(6);
        mmt::Matrix a(rows, 2);
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t i = 0; i < rows; ++i)
                a.at(i, j) = static_cast<double>(rng.below(2001)) / 100.0 - 10.0;
        auto got = mmt::truncated_svd(a, 2);
        auto want = oracle::svd_two_columns(to_oracle(a));
        REQUIRE(got.sigma.size() <= 2);
        for (std::size_t k = 0; k < got.sigma.size(); ++k)
            CHECK(got.sigma[k] == doctest::Approx(want.sigma[k]).epsilon(1e-9));
    }
}

TEST_CASE("left singular vectors are orthonormal and ordered") {
    mmt::SmallRng rng(99);
    mmt::Matrix a(8, 5);
    for (std::size_t j = 0; j < 5; ++j)
        for (std::size_t i = 0; i < 8; ++i)
            a.at(i, j) = static_cast<double>(rng.below(101)) / 10.0 - 5.0;
    auto svd = mmt::truncated_svd(a, 5);
    for (std::size_t p = 0; p < svd.sigma.size(); ++p) {
        if (p + 1 < svd.sigma.size()) CHECK(svd.sigma[p] >= svd.sigma[p + 1]);
        for (std::size_t q = p; q < svd.sigma.size(); ++q) {
            double dot = 0.0;
            for (std::size_t i = 0; i < 8; ++i) dot += svd.u.at(i, p) * svd.u.at(i, q);
            CHECK(dot == doctest::Approx(p == q ? 1.0 : 0.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("reconstruction: projecting training columns preserves norms") {
    // With full rank, U U^T acts as identity on the column space, so
    // |U^T a_j| must equal |a_j|.
    mmt::SmallRng rng(4242);
    mmt::Matrix a(6, 4);
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t i = 0; i < 6; ++i)
            a.at(i, j) = static_cast<double>(rng.below(1001)) / 50.0 - 10.0;
    auto svd = mmt::truncated_svd(a, 4);
    REQUIRE(svd.sigma.size() == 4);
    for (std::size_t j = 0; j < 4; ++j) {
        double norm2 = 0.0, proj2 = 0.0;
        for (std::size_t i = 0; i < 6; ++i) norm2 += a.at(i, j) * a.at(i, j);
        for (std::size_t k = 0; k < 4; ++k) {
            double c = 0.0;
            for (std::size_t i = 0; i < 6; ++i) c += svd.u.at(i, k) * a.at(i, j);
            proj2 += c * c;
        }
        CHECK(proj2 == doctest::Approx(norm2).epsilon(1e-9));
    }
}

TEST_CASE("rank deficiency is detected") {
    mmt::Matrix a(3, 3);
    // Column 2 = column 0 + column 1.
    double base[3][2] = {{1.0, 2.0}, {3.0, -1.0}, {0.5, 0.5}};
    for (std::size_t i = 0; i < 3; ++i) {
        a.at(i, 0) = base[i][0];
        a.at(i, 1) = base[i][1];
        a.at(i, 2) = base[i][0] + base[i][1];
    }
    auto svd = mmt::truncated_svd(a, 3);
    CHECK(svd.sigma.size() == 2);
}
