// Copyright 2026 The qudisc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qudisc/linalg.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qudisc;

namespace {

template <typename T>
Matrix<T> random_hermitian(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Matrix<T> m(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i <= j; ++i) {
            T v;
            if constexpr (is_complex_v<T>) {
                v = i == j ? T(normal(rng), 0.0) : T(normal(rng), normal(rng));
            } else {
                v = normal(rng);
            }
            m(i, j) = v;
            m(j, i) = conj_of(v);
        }
    return m;
}

template <typename T>
Matrix<T> reconstruct(const EigenSystem<T>& es) {
    Matrix<T> scaled = es.vectors;
    for (std::size_t c = 0; c < scaled.cols(); ++c)
        for (std::size_t r = 0; r < scaled.rows(); ++r) scaled(r, c) *= es.values[c];
    return multiply(scaled, adjoint(es.vectors));
}

} // namespace

TEST(matrix, basic_algebra) {
    RealMatrix a(2, 3);
    a(0, 0) = 1;
    a(0, 2) = 2;
    a(1, 1) = 3;
    const RealMatrix at = adjoint(a);
    EXPECT_EQ(at.rows(), 3u);
    EXPECT_EQ(at(2, 0), 2.0);
    const RealMatrix p = multiply(a, at);
    EXPECT_EQ(p(0, 0), 5.0);
    EXPECT_EQ(p(1, 1), 9.0);
    EXPECT_EQ(p(0, 1), 0.0);
    EXPECT_EQ(max_abs(adjoint_multiply(at, at) - p), 0.0);
    EXPECT_EQ(trace(RealMatrix::identity(4)), 4.0);
}

TEST(matrix, kron_orders_first_factor_most_significant) {
    RealMatrix a(2, 2);
    a(0, 1) = 1;
    const RealMatrix b = RealMatrix::identity(3);
    const RealMatrix k = kron(a, b);
    ASSERT_EQ(k.rows(), 6u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(k(i, 3 + i), 1.0);
    EXPECT_EQ(frobenius_norm(k), std::sqrt(3.0));
}

TEST(hermitian_eig, diagonal) {
    RealMatrix d(4, 4);
    const double diag[] = {3.0, -1.0, 2.0, 0.5};
    for (std::size_t i = 0; i < 4; ++i) d(i, i) = diag[i];
    const auto es = hermitian_eig(d);
    EXPECT_EQ(es.values, (std::vector<double>{-1.0, 0.5, 2.0, 3.0}));
    // eigenvectors are unit vectors on the original positions
    const std::size_t pos[] = {1, 3, 2, 0};
    for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(std::abs(es.vectors(pos[c], c)), 1.0, 1e-15);
}

TEST(hermitian_eig, pauli_x) {
    ComplexMatrix x(2, 2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    const auto es = hermitian_eig(x);
    EXPECT_NEAR(es.values[0], -1.0, 1e-15);
    EXPECT_NEAR(es.values[1], 1.0, 1e-15);
}

TEST(hermitian_eig, pauli_y_is_complex) {
    ComplexMatrix y(2, 2);
    y(0, 1) = cplx(0, -1);
    y(1, 0) = cplx(0, 1);
    const auto es = hermitian_eig(y);
    EXPECT_NEAR(es.values[0], -1.0, 1e-15);
    EXPECT_NEAR(es.values[1], 1.0, 1e-15);
    EXPECT_LE(eigen_residual(y, es), 1e-14);
}

TEST(hermitian_eig, empty_and_scalar) {
    EXPECT_TRUE(hermitian_eig(RealMatrix(0, 0)).values.empty());
    RealMatrix s(1, 1);
    s(0, 0) = -4.5;
    EXPECT_EQ(hermitian_eig(s).values, std::vector<double>{-4.5});
    EXPECT_THROW(hermitian_eig(RealMatrix(2, 3)), std::invalid_argument);
}

TEST(hermitian_eig, random_complex_reconstruction) {
    for (std::size_t n : {3u, 17u, 50u, 120u}) {
        const auto m = random_hermitian<cplx>(n, 7 + n);
        const auto es = hermitian_eig(m);
        const double scale = frobenius_norm(m);
        EXPECT_LE(frobenius_norm(reconstruct(es) - m), 1e-9 * scale) << n;
        EXPECT_LE(eigen_residual(m, es), 1e-10 * spectral_norm_hermitian(m)) << n;
        EXPECT_LE(orthonormality_defect(es.vectors), 1e-10) << n;
        EXPECT_TRUE(std::is_sorted(es.values.begin(), es.values.end()));
    }
}

TEST(hermitian_eig, random_real_reconstruction) {
    for (std::size_t n : {2u, 31u, 200u}) {
        const auto m = random_hermitian<double>(n, 99 + n);
        const auto es = hermitian_eig(m);
        EXPECT_LE(frobenius_norm(reconstruct(es) - m), 1e-9 * frobenius_norm(m)) << n;
        EXPECT_LE(eigen_residual(m, es), 1e-10 * spectral_norm_hermitian(m)) << n;
        EXPECT_LE(orthonormality_defect(es.vectors), 1e-10) << n;
    }
}

TEST(hermitian_eig, degenerate_projector) {
    // rank-3 projector in dimension 8 with heavily repeated eigenvalues
    RealMatrix v(8, 3);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal;
    for (std::size_t i = 0; i < v.data().size(); ++i) v.data()[i] = normal(rng);
    // Gram-Schmidt
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t p = 0; p < c; ++p) {
            double d = 0.0;
            for (std::size_t r = 0; r < 8; ++r) d += v(r, c) * v(r, p);
            for (std::size_t r = 0; r < 8; ++r) v(r, c) -= d * v(r, p);
        }
        double nrm = 0.0;
        for (std::size_t r = 0; r < 8; ++r) nrm += v(r, c) * v(r, c);
        for (std::size_t r = 0; r < 8; ++r) v(r, c) /= std::sqrt(nrm);
    }
    const RealMatrix p = multiply(v, adjoint(v));
    const auto es = hermitian_eig(p);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(es.values[i], 0.0, 1e-14);
    for (std::size_t i = 5; i < 8; ++i) EXPECT_NEAR(es.values[i], 1.0, 1e-14);
    EXPECT_LE(orthonormality_defect(es.vectors), 1e-13);
}

TEST(hermitian_eig, large_zero_cluster) {
    // difference of two rank-20 projectors in dimension 160: 120 eigenvalues at exactly zero
    std::mt19937_64 rng(17);
    std::normal_distribution<double> normal;
    auto random_projector = [&](std::size_t dim, std::size_t rank) {
        RealMatrix v(dim, rank);
        for (std::size_t i = 0; i < v.data().size(); ++i) v.data()[i] = normal(rng);
        const auto es = hermitian_eig(multiply(v, adjoint(v)));
        RealMatrix basis(dim, rank);
        for (std::size_t c = 0; c < rank; ++c)
            for (std::size_t r = 0; r < dim; ++r) basis(r, c) = es.vectors(r, dim - 1 - c);
        return multiply(basis, adjoint(basis));
    };
    RealMatrix lambda = random_projector(160, 20) * 0.3;
    lambda -= random_projector(160, 20) * 0.7;
    const auto es = hermitian_eig(lambda);
    EXPECT_LE(eigen_residual(lambda, es), 1e-10 * spectral_norm_hermitian(lambda));
    EXPECT_LE(orthonormality_defect(es.vectors), 1e-10);
    std::size_t zeros = 0;
    for (double v : es.values) zeros += std::abs(v) < 1e-12 ? 1 : 0;
    EXPECT_EQ(zeros, 120u);
}
