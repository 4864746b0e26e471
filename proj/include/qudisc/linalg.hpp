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

/**
 * @file linalg.hpp
 * Small dense linear algebra for the oracle: a column-major matrix over
 * double or std::complex<double>, products, Kronecker products, and a
 * Hermitian eigensolver (Householder reduction to real tridiagonal form
 * followed by implicit QL with Wilkinson-type shifts).
 */
#pragma once

#include "qudisc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace qudisc {

using cplx = std::complex<double>;

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename T>
inline constexpr bool is_complex_v = is_complex<T>::value;

template <typename T>
constexpr T conj_of(const T& x) {
    if constexpr (is_complex_v<T>) {
        return std::conj(x);
    } else {
        return x;
    }
}

template <typename T>
constexpr double real_of(const T& x) {
    if constexpr (is_complex_v<T>) {
        return x.real();
    } else {
        return x;
    }
}

template <typename T>
constexpr double imag_of(const T& x) {
    if constexpr (is_complex_v<T>) {
        return x.imag();
    } else {
        return 0.0;
    }
}

template <typename T>
constexpr double abs2(const T& x) {
    if constexpr (is_complex_v<T>) {
        return std::norm(x);
    } else {
        return x * x;
    }
}

/// Column-major dense matrix.
template <typename T>
class Matrix {
  public:
    using value_type = T;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
    const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

    std::span<T> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
    std::span<const T> col(std::size_t j) const noexcept { return {data_.data() + j * rows_, rows_}; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Matrix& operator*=(const T& s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, const T& s) { return a *= s; }

  private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<cplx>;

/// Dense Hermitian operator (complex storage); Hermiticity is a usage contract
/// checked by hermiticity_defect().
using DenseHermitian = ComplexMatrix;

template <typename T>
Matrix<cplx> to_complex(const Matrix<T>& m) {
    Matrix<cplx> out(m.rows(), m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = cplx(m(i, j));
    return out;
}

template <typename T>
T dot(std::span<const T> x, std::span<const T> y) {
    T s{};
    for (std::size_t i = 0; i < x.size(); ++i) s += conj_of(x[i]) * y[i];
    return s;
}

template <typename T>
double norm2(std::span<const T> x) {
    double s = 0.0;
    for (const T& v : x) s += abs2(v);
    return std::sqrt(s);
}

/// A B
template <typename T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: inner dimensions differ");
    Matrix<T> c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        auto cj = c.col(j);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T bkj = b(k, j);
            if (bkj == T{}) continue;
            auto ak = a.col(k);
            for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
        }
    }
    return c;
}

/// A^dagger B
template <typename T>
Matrix<T> adjoint_multiply(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("adjoint_multiply: row counts differ");
    Matrix<T> c(a.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t i = 0; i < a.cols(); ++i) c(i, j) = dot<T>(a.col(i), b.col(j));
    return c;
}

template <typename T>
Matrix<T> adjoint(const Matrix<T>& a) {
    Matrix<T> t(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = conj_of(a(i, j));
    return t;
}

/// A (x) B, with A's index most significant.
template <typename T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ja = 0; ja < a.cols(); ++ja)
        for (std::size_t jb = 0; jb < b.cols(); ++jb) {
            auto out = k.col(ja * b.cols() + jb);
            for (std::size_t ia = 0; ia < a.rows(); ++ia) {
                const T x = a(ia, ja);
                if (x == T{}) continue;
                for (std::size_t ib = 0; ib < b.rows(); ++ib) out[ia * b.rows() + ib] = x * b(ib, jb);
            }
        }
    return k;
}

template <typename T>
T trace(const Matrix<T>& a) {
    T t{};
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
    return t;
}

template <typename T>
double frobenius_norm(const Matrix<T>& a) {
    return norm2<T>(a.data());
}

template <typename T>
double max_abs(const Matrix<T>& a) {
    double m = 0.0;
    for (const T& x : a.data()) m = std::max(m, std::abs(x));
    return m;
}

/// max |M - M^dagger| entry.
template <typename T>
double hermiticity_defect(const Matrix<T>& a) {
    if (!a.is_square()) return INFINITY;
    double m = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i <= j; ++i) m = std::max(m, std::abs(a(i, j) - conj_of(a(j, i))));
    return m;
}

/// Eigen-decomposition M = V diag(values) V^dagger; values ascending.
template <typename T>
struct EigenSystem {
    std::vector<double> values;
    Matrix<T> vectors;
};

namespace detail {

/// Implicit QL on the real symmetric tridiagonal (d, e), e[i] coupling i and i+1.
/// Rotations are accumulated into the columns of z.
template <typename T>
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, Matrix<T>& z) {
    const std::size_t n = d.size();
    constexpr int kMaxIterations = 60;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double anorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]));
    // off-diagonals at round-off level of the whole matrix are dropped even between tiny diagonals
    const double floor = eps * anorm;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m = l;
        for (;;) {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd || std::abs(e[m]) <= floor) break;
            }
            if (m == l) break;
            if (++iter > kMaxIterations) {
                throw ConvergenceError("hermitian_eig: QL iteration did not converge");
            }
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            bool underflow = false;
            for (std::size_t ii = m; ii-- > l;) {
                const double f = s * e[ii];
                const double b = c * e[ii];
                r = std::hypot(f, g);
                e[ii + 1] = r;
                if (r == 0.0) {
                    d[ii + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[ii + 1] - p;
                r = (d[ii] - g) * s + 2.0 * c * b;
                p = s * r;
                d[ii + 1] = g + p;
                g = c * r - b;
                auto zi = z.col(ii);
                auto zi1 = z.col(ii + 1);
                for (std::size_t k = 0; k < z.rows(); ++k) {
                    const T t = zi1[k];
                    zi1[k] = s * zi[k] + c * t;
                    zi[k] = c * zi[k] - s * t;
                }
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

} // namespace detail

/**
 * Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
 *
 * Only the lower triangle is read. Throws ConvergenceError if the QL sweep
 * exceeds its iteration cap; never returns a partially converged result.
 */
template <typename T>
EigenSystem<T> hermitian_eig(const Matrix<T>& m) {
    if (!m.is_square()) throw std::invalid_argument("hermitian_eig: matrix is not square");
    const std::size_t n = m.rows();
    EigenSystem<T> out;
    if (n == 0) return out;

    // full Hermitian copy from the lower triangle
    Matrix<T> a(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        a(j, j) = T(real_of(m(j, j)));
        for (std::size_t i = j + 1; i < n; ++i) {
            a(i, j) = m(i, j);
            a(j, i) = conj_of(m(i, j));
        }
    }

    std::vector<double> diag(n, 0.0);
    std::vector<double> off(n, 0.0);
    std::vector<T> tau(n, T{});
    std::vector<T> p(n);
    std::vector<T> vbuf(n);

    // Householder: A <- H^dagger A H with H = I - tau v v^dagger, v = (1, a(k+2.., k)).
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const T alpha = a(k + 1, k);
        double xnorm2 = 0.0;
        for (std::size_t i = k + 2; i < n; ++i) xnorm2 += abs2(a(i, k));
        const double alphr = real_of(alpha);
        const double alphi = imag_of(alpha);
        double beta = alphr;
        T t{};
        if (xnorm2 > 0.0 || alphi != 0.0) {
            beta = -std::copysign(std::sqrt(alphr * alphr + alphi * alphi + xnorm2), alphr);
            if constexpr (is_complex_v<T>) {
                t = T((beta - alphr) / beta, -alphi / beta);
            } else {
                t = (beta - alphr) / beta;
            }
            const T scale = T{1} / (alpha - T(beta));
            for (std::size_t i = k + 2; i < n; ++i) a(i, k) *= scale;
        }
        off[k] = beta;
        tau[k] = t;
        if (t == T{}) continue;

        // v = (1, a(k+2.., k)) on indices k+1..n-1
        vbuf[k + 1] = T{1};
        for (std::size_t i = k + 2; i < n; ++i) vbuf[i] = a(i, k);
        auto v = [&](std::size_t i) -> const T& { return vbuf[i]; };

        // p = tau * A22 v
        std::fill(p.begin(), p.end(), T{});
        for (std::size_t j = k + 1; j < n; ++j) {
            const T vj = v(j);
            for (std::size_t i = k + 1; i < n; ++i) p[i] += a(i, j) * vj;
        }
        T pv{};
        for (std::size_t i = k + 1; i < n; ++i) {
            p[i] *= t;
            pv += conj_of(p[i]) * v(i);
        }
        // w = p - (tau/2)(p^dagger v) v
        const T half = T(-0.5) * t * pv;
        for (std::size_t i = k + 1; i < n; ++i) p[i] += half * v(i);
        // A22 -= v w^dagger + w v^dagger
        for (std::size_t j = k + 1; j < n; ++j) {
            const T wj = conj_of(p[j]);
            const T vj = conj_of(v(j));
            for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= v(i) * wj + p[i] * vj;
        }
    }
    for (std::size_t i = 0; i < n; ++i) diag[i] = real_of(a(i, i));
    off[n - 1] = 0.0;

    // Q = H(0) H(1) ... H(n-2), accumulated right to left
    Matrix<T> q = Matrix<T>::identity(n);
    for (std::size_t kk = n - 1; kk-- > 0;) {
        const T t = tau[kk];
        if (t == T{}) continue;
        vbuf[kk + 1] = T{1};
        for (std::size_t i = kk + 2; i < n; ++i) vbuf[i] = a(i, kk);
        auto v = [&](std::size_t i) -> const T& { return vbuf[i]; };
        for (std::size_t j = kk + 1; j < n; ++j) {
            T sj{};
            for (std::size_t i = kk + 1; i < n; ++i) sj += conj_of(v(i)) * q(i, j);
            sj *= t;
            for (std::size_t i = kk + 1; i < n; ++i) q(i, j) -= v(i) * sj;
        }
    }

    detail::tridiagonal_ql(diag, off, q);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });
    out.values.resize(n);
    out.vectors = Matrix<T>(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        out.values[c] = diag[order[c]];
        auto src = q.col(order[c]);
        std::copy(src.begin(), src.end(), out.vectors.col(c).begin());
    }
    return out;
}

/// Eigenvalues only.
template <typename T>
std::vector<double> hermitian_eigenvalues(const Matrix<T>& m) {
    return hermitian_eig(m).values;
}

/// max_i ||M v_i - lambda_i v_i||.
template <typename T>
double eigen_residual(const Matrix<T>& m, const EigenSystem<T>& es) {
    const Matrix<T> mv = multiply(m, es.vectors);
    double worst = 0.0;
    for (std::size_t c = 0; c < es.values.size(); ++c) {
        double r = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) r += abs2(mv(i, c) - es.values[c] * es.vectors(i, c));
        worst = std::max(worst, std::sqrt(r));
    }
    return worst;
}

/// max |V^dagger V - I| entry.
template <typename T>
double orthonormality_defect(const Matrix<T>& v) {
    Matrix<T> g = adjoint_multiply(v, v);
    for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= T{1};
    return max_abs(g);
}

/// Largest |eigenvalue|, i.e. the spectral norm of a Hermitian matrix.
template <typename T>
double spectral_norm_hermitian(const Matrix<T>& m) {
    const auto ev = hermitian_eigenvalues(m);
    if (ev.empty()) return 0.0;
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

} // namespace qudisc
