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
 * @file combinatorics.hpp
 * Exact integer/rational combinatorics: Young diagrams, hook lengths, the
 * S_N and U(n) irrep dimension formulas, binomials, and ln Gamma at
 * half-integer arguments.
 *
 * Everything here is exact (arbitrary precision); conversion to floating
 * point happens in the consumers, through to_double().
 */
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qudisc {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Young diagram [lambda]: weakly decreasing positive row lengths.
class Partition {
  public:
    Partition() = default;

    explicit Partition(std::vector<int> rows) : rows_(std::move(rows)) {
        if (rows_.empty()) {
            throw std::invalid_argument("Partition: no rows");
        }
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (rows_[i] < 1) {
                throw std::invalid_argument("Partition: row length must be >= 1");
            }
            if (i > 0 && rows_[i] > rows_[i - 1]) {
                throw std::invalid_argument("Partition: rows must be weakly decreasing");
            }
        }
    }

    Partition(std::initializer_list<int> rows) : Partition(std::vector<int>(rows)) {}

    /// Single-row diagram [m].
    static Partition row(int m) { return Partition({m}); }

    /// Two-row diagram [top, bottom], or [top] when bottom == 0.
    static Partition two_row(int top, int bottom) {
        return bottom == 0 ? Partition({top}) : Partition({top, bottom});
    }

    [[nodiscard]] const std::vector<int>& rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t num_rows() const noexcept { return rows_.size(); }
    [[nodiscard]] int cells() const noexcept {
        return std::accumulate(rows_.begin(), rows_.end(), 0);
    }

    /// Length of column j (0-based).
    [[nodiscard]] int column_length(int j) const noexcept {
        int len = 0;
        for (int r : rows_) {
            if (r > j) ++len;
        }
        return len;
    }

    bool operator==(const Partition&) const = default;

  private:
    std::vector<int> rows_;
};

/// All partitions of `total`, in reverse lexicographic order ([total] first).
inline std::vector<Partition> partitions_of(int total) {
    std::vector<Partition> out;
    if (total <= 0) return out;
    std::vector<int> current;
    std::function<void(int, int)> rec = [&](int remaining, int max_part) {
        if (remaining == 0) {
            out.emplace_back(current);
            return;
        }
        for (int part = std::min(remaining, max_part); part >= 1; --part) {
            current.push_back(part);
            rec(remaining - part, part);
            current.pop_back();
        }
    };
    rec(total, total);
    return out;
}

/// Hook length of every cell: 1 + arm + leg.
inline std::vector<std::vector<int>> hook_lengths(const Partition& p) {
    std::vector<std::vector<int>> hooks;
    hooks.reserve(p.num_rows());
    for (std::size_t i = 0; i < p.num_rows(); ++i) {
        const int len = p.rows()[i];
        std::vector<int> row(static_cast<std::size_t>(len));
        for (int j = 0; j < len; ++j) {
            const int arm = len - j - 1;
            const int leg = p.column_length(j) - static_cast<int>(i) - 1;
            row[static_cast<std::size_t>(j)] = 1 + arm + leg;
        }
        hooks.push_back(std::move(row));
    }
    return hooks;
}

inline BigInt factorial(int m) {
    if (m < 0) throw std::domain_error("factorial of a negative number");
    BigInt f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

/// Exact binomial coefficient; 0 outside 0 <= b <= a.
inline BigInt binomial(int a, int b) {
    if (a < 0) throw std::domain_error("binomial: negative upper argument");
    if (b < 0 || b > a) return 0;
    b = std::min(b, a - b);
    BigInt c = 1;
    for (int i = 1; i <= b; ++i) {
        c *= a - b + i;
        c /= i; // exact: c is C(a-b+i, i) after this step
    }
    return c;
}

namespace detail {

inline BigInt exact_quotient(const BigInt& num, const BigInt& den, const char* what) {
    BigInt q;
    BigInt r;
    boost::multiprecision::divide_qr(num, den, q, r);
    if (r != 0) {
        throw std::logic_error(std::string(what) + ": quotient is not an integer");
    }
    return q;
}

inline BigInt hook_product(const Partition& p) {
    BigInt prod = 1;
    for (const auto& row : hook_lengths(p)) {
        for (int h : row) prod *= h;
    }
    return prod;
}

} // namespace detail

/// f^[lambda]: number of standard Young tableaux, N! / prod(hooks).
inline BigInt sym_group_dim(const Partition& p) {
    return detail::exact_quotient(factorial(p.cells()), detail::hook_product(p), "sym_group_dim");
}

/// d^[lambda](n): dimension of the U(n) irrep, prod over cells of (n - i + j) / hook.
/// Zero when the diagram has more rows than n.
inline BigInt unitary_dim(const Partition& p, int n) {
    if (n < 1) throw std::domain_error("unitary_dim: dimension must be >= 1");
    if (static_cast<int>(p.num_rows()) > n) return 0;
    BigInt num = 1;
    for (std::size_t i = 0; i < p.num_rows(); ++i) {
        for (int j = 0; j < p.rows()[i]; ++j) {
            num *= n - static_cast<int>(i) + j;
        }
    }
    return detail::exact_quotient(num, detail::hook_product(p), "unitary_dim");
}

/// Correctly rounded (to within one ulp) conversion of an exact rational.
inline double to_double(const BigRational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (num == 0) return 0.0;
    const bool negative = num < 0;
    if (negative) num = -num;
    const long shift =
        64 - (static_cast<long>(boost::multiprecision::msb(num)) -
              static_cast<long>(boost::multiprecision::msb(den)));
    BigInt q = shift >= 0 ? BigInt((num << shift) / den) : BigInt(num / (den << -shift));
    const double value = std::ldexp(q.convert_to<double>(), static_cast<int>(-shift));
    return negative ? -value : value;
}

inline double to_double(const BigInt& i) { return i.convert_to<double>(); }

/// Half-integer stored as its double (2j), so comparisons stay exact.
class HalfInt {
  public:
    constexpr HalfInt() = default;
    static constexpr HalfInt from_twice(int twice) { return HalfInt(twice); }
    static constexpr HalfInt integer(int value) { return HalfInt(2 * value); }

    [[nodiscard]] constexpr int twice() const noexcept { return twice_; }
    [[nodiscard]] constexpr bool is_integer() const noexcept { return twice_ % 2 == 0; }
    [[nodiscard]] constexpr double value() const noexcept { return twice_ / 2.0; }

    constexpr bool operator==(const HalfInt&) const = default;

  private:
    constexpr explicit HalfInt(int twice) : twice_(twice) {}
    int twice_ = 0;
};

/// ln Gamma(x) for x in {1/2, 1, 3/2, ...}, by the recurrence Gamma(x+1) = x Gamma(x)
/// from Gamma(1/2) = sqrt(pi) and Gamma(1) = 1.
inline double log_gamma_half(HalfInt x) {
    if (x.twice() <= 0) {
        throw std::domain_error("log_gamma_half: argument must be positive");
    }
    // ln sqrt(pi)
    constexpr long double ln_sqrt_pi = 0.572364942924700087071713675676529356L;
    long double acc = x.is_integer() ? 0.0L : ln_sqrt_pi;
    for (int t = x.is_integer() ? 2 : 1; t < x.twice(); t += 2) {
        acc += std::log(static_cast<long double>(t) / 2.0L);
    }
    return static_cast<double>(acc);
}

/// Checked overload for callers holding a plain double; rejects non-half-integers.
inline double log_gamma_half(double x) {
    const double twice = 2.0 * x;
    if (!(x > 0.0) || twice != std::round(twice) || twice > 2.0e9) {
        throw std::domain_error("log_gamma_half: argument must be a positive half-integer");
    }
    return log_gamma_half(HalfInt::from_twice(static_cast<int>(twice)));
}

} // namespace qudisc
