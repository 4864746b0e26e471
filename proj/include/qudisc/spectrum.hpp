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
 * @file spectrum.hpp
 * Jordan-block structure of the two mean input states.
 *
 * Averaging the unknown pure states turns the inputs into
 *   rho1 = 1^[n1] (x) 1^[nC] / d1   on the (AB)|C split,
 *   rho2 = 1^[nA] (x) 1^[n2] / d2   on the A|(BC) split.
 * Both supports decompose into two-row U(n) irreps [N-k, k]; within each
 * irrep the two supports meet at a single Jordan angle with cosine O_k and
 * multiplicity d^k = d^[N-k,k](n).
 */
#pragma once

#include "qudisc/combinatorics.hpp"
#include "qudisc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

namespace qudisc {

/// Tolerance on eta1 + eta2 == 1.
inline constexpr double kPriorSumTolerance = 1e-12;

struct ProblemConfig {
    int n = 2;  ///< single-copy Hilbert-space dimension
    int n_A = 1;
    int n_B = 1;
    int n_C = 1;
    double eta1 = 0.5;
    double eta2 = 0.5;

    /// Config with eta2 = 1 - eta1.
    static ProblemConfig make(int n, int n_A, int n_B, int n_C, double eta1 = 0.5) {
        return ProblemConfig{n, n_A, n_B, n_C, eta1, 1.0 - eta1};
    }

    [[nodiscard]] int n1() const noexcept { return n_A + n_B; }
    [[nodiscard]] int n2() const noexcept { return n_B + n_C; }
    [[nodiscard]] int total_copies() const noexcept { return n_A + n_B + n_C; }
    [[nodiscard]] int k_max() const noexcept { return std::min(n_A, n_C); }

    /// Rank of rho1: d^[n1] d^[nC].
    [[nodiscard]] BigInt rank1() const {
        return unitary_dim(Partition::row(n1()), n) * unitary_dim(Partition::row(n_C), n);
    }
    /// Rank of rho2: d^[nA] d^[n2].
    [[nodiscard]] BigInt rank2() const {
        return unitary_dim(Partition::row(n_A), n) * unitary_dim(Partition::row(n2()), n);
    }

    bool operator==(const ProblemConfig&) const = default;
};

inline void validate(const ProblemConfig& cfg) {
    if (cfg.n < 2) throw ConfigError("dimension n must be >= 2");
    if (cfg.n_A < 1 || cfg.n_B < 1 || cfg.n_C < 1) {
        throw ConfigError("copy counts n_A, n_B, n_C must be >= 1");
    }
    if (!(cfg.eta1 >= 0.0) || !(cfg.eta2 >= 0.0)) {
        throw ConfigError("priors must be non-negative");
    }
    if (std::abs(cfg.eta1 + cfg.eta2 - 1.0) > kPriorSumTolerance) {
        throw ConfigError("priors must sum to 1");
    }
}

/// A config with n_A >= n_C, plus whether A/C (and the priors) were exchanged to get it.
struct CanonicalConfig {
    ProblemConfig config;
    bool swapped = false;
};

inline CanonicalConfig canonicalize(const ProblemConfig& cfg) {
    validate(cfg);
    if (cfg.n_A >= cfg.n_C) return {cfg, false};
    ProblemConfig c = cfg;
    std::swap(c.n_A, c.n_C);
    std::swap(c.eta1, c.eta2);
    return {c, true};
}

namespace detail {

inline void check_block_index(int k, const ProblemConfig& cfg) {
    if (k < 0 || k > cfg.k_max()) {
        throw std::out_of_range("block index k=" + std::to_string(k) + " outside 0.." +
                                std::to_string(cfg.k_max()));
    }
}

} // namespace detail

/// O_k^2 = C(n1-k, nB) C(n2-k, nB) / (C(n1, nB) C(n2, nB)), exact.
inline BigRational overlap_squared(int k, const ProblemConfig& cfg) {
    detail::check_block_index(k, cfg);
    const int nb = cfg.n_B;
    return BigRational(binomial(cfg.n1() - k, nb) * binomial(cfg.n2() - k, nb),
                       binomial(cfg.n1(), nb) * binomial(cfg.n2(), nb));
}

/// Jordan cosine O_k of block k.
inline double overlap(int k, const ProblemConfig& cfg) {
    return std::sqrt(to_double(overlap_squared(k, cfg)));
}

/// d^k = ((N-2k+1)/(N-k+1)) C(N+n-k-1, n-1) C(n+k-2, n-2).
inline BigInt multiplicity(int k, const ProblemConfig& cfg) {
    detail::check_block_index(k, cfg);
    const int N = cfg.total_copies();
    const int n = cfg.n;
    const BigInt num = BigInt(N - 2 * k + 1) * binomial(N + n - k - 1, n - 1) * binomial(n + k - 2, n - 2);
    return detail::exact_quotient(num, BigInt(N - k + 1), "multiplicity");
}

struct JordanBlock {
    int k = 0;
    double overlap = 1.0;           ///< O_k
    BigRational overlap_squared{1}; ///< O_k^2, exact
    BigInt multiplicity;            ///< d^k
};

struct JordanSpectrum {
    std::vector<JordanBlock> blocks; ///< k = 0..k_max
    BigInt d1;
    BigInt d2;
    int k_max = 0;

    /// dim H'^perp: directions of the larger support with no partner.
    [[nodiscard]] BigInt unpaired_dimension() const { return d2 > d1 ? BigInt(d2 - d1) : BigInt(d1 - d2); }
};

/// Blocks of the two mean states. Holds for any config; the invariants
/// (sum of d^k equals the smaller rank, overlaps strictly decreasing) are checked.
inline JordanSpectrum jordan_spectrum(const ProblemConfig& cfg) {
    validate(cfg);
    JordanSpectrum s;
    s.d1 = cfg.rank1();
    s.d2 = cfg.rank2();
    s.k_max = cfg.k_max();
    BigInt total = 0;
    for (int k = 0; k <= s.k_max; ++k) {
        JordanBlock b;
        b.k = k;
        b.overlap_squared = overlap_squared(k, cfg);
        b.overlap = std::sqrt(to_double(b.overlap_squared));
        b.multiplicity = multiplicity(k, cfg);
        if (k > 0 && !(b.overlap_squared < s.blocks.back().overlap_squared)) {
            throw std::logic_error("jordan_spectrum: overlaps not strictly decreasing");
        }
        total += b.multiplicity;
        s.blocks.push_back(std::move(b));
    }
    if (s.blocks.front().overlap_squared != 1) {
        throw std::logic_error("jordan_spectrum: O_0 != 1");
    }
    if (total != std::min(s.d1, s.d2)) {
        throw std::logic_error("jordan_spectrum: block multiplicities do not add up to the smaller rank");
    }
    return s;
}

namespace detail {

inline BigInt fact_twice(int twice) {
    // factorial of twice/2; callers guarantee twice is even and >= 0
    return factorial(twice / 2);
}

inline bool triad(int a, int b, int c) {
    return a >= 0 && b >= 0 && c >= 0 && a + b >= c && b + c >= a && c + a >= b &&
           (a + b + c) % 2 == 0;
}

/// Delta(abc)^2 = (a+b-c)! (a-b+c)! (-a+b+c)! / (a+b+c+1)!, arguments doubled.
inline BigRational triangle_coefficient(int a, int b, int c) {
    return BigRational(fact_twice(a + b - c) * fact_twice(a - b + c) * fact_twice(-a + b + c),
                       fact_twice(a + b + c + 2));
}

} // namespace detail

/**
 * Wigner 6j symbol {j1 j2 j3; j4 j5 j6} by the Racah single sum.
 *
 * The alternating sum is evaluated in exact rational arithmetic; the only
 * rounding is the final square root. Returns 0 when any of the triads
 * (j1 j2 j3), (j1 j5 j6), (j4 j2 j6), (j4 j5 j3) fails to couple.
 */
inline double wigner_6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6) {
    const int a = j1.twice(), b = j2.twice(), c = j3.twice();
    const int d = j4.twice(), e = j5.twice(), f = j6.twice();
    if (!detail::triad(a, b, c) || !detail::triad(a, e, f) || !detail::triad(d, b, f) ||
        !detail::triad(d, e, c)) {
        return 0.0;
    }
    const BigRational delta2 = detail::triangle_coefficient(a, b, c) * detail::triangle_coefficient(a, e, f) *
                               detail::triangle_coefficient(d, b, f) * detail::triangle_coefficient(d, e, c);

    // triad sums and the three "quad" sums, all integers
    const int t1 = (a + b + c) / 2, t2 = (a + e + f) / 2, t3 = (d + b + f) / 2, t4 = (d + e + c) / 2;
    const int q1 = (a + b + d + e) / 2, q2 = (b + c + e + f) / 2, q3 = (c + a + f + d) / 2;
    const int t_lo = std::max({t1, t2, t3, t4});
    const int t_hi = std::min({q1, q2, q3});

    BigRational sum = 0;
    for (int t = t_lo; t <= t_hi; ++t) {
        BigRational term(factorial(t + 1),
                         factorial(t - t1) * factorial(t - t2) * factorial(t - t3) * factorial(t - t4) *
                             factorial(q1 - t) * factorial(q2 - t) * factorial(q3 - t));
        if (t % 2 != 0) term = -term;
        sum += term;
    }
    if (sum == 0) return 0.0;
    const double magnitude = std::sqrt(to_double(delta2 * sum * sum));
    return sum < 0 ? -magnitude : magnitude;
}

/// O_k from angular-momentum recoupling (n = 2 picture, valid for every n):
/// (-1)^(jA+jB+jC+J) sqrt((2 jAB + 1)(2 jBC + 1)) {jA jB jAB; jC J jBC}, J = N/2 - k.
inline double overlap_via_6j(int k, const ProblemConfig& cfg) {
    detail::check_block_index(k, cfg);
    const int N = cfg.total_copies();
    const int twice_J = N - 2 * k;
    const double sixj = wigner_6j(HalfInt::from_twice(cfg.n_A), HalfInt::from_twice(cfg.n_B),
                                  HalfInt::from_twice(cfg.n1()), HalfInt::from_twice(cfg.n_C),
                                  HalfInt::from_twice(twice_J), HalfInt::from_twice(cfg.n2()));
    // jA + jB + jC + J = (N + N - 2k) / 2 = N - k
    const double phase = ((N - k) % 2 == 0) ? 1.0 : -1.0;
    return phase * std::sqrt(static_cast<double>((cfg.n1() + 1) * (cfg.n2() + 1))) * sixj;
}

struct BlockPriors {
    double p_block = 0.0;     ///< eta1/d1 + eta2/d2
    double eta_block_1 = 0.0; ///< conditional prior of the rho1 Jordan vector
    double eta_block_2 = 0.0;
};

inline BlockPriors block_priors(const ProblemConfig& cfg) {
    validate(cfg);
    const double d1 = to_double(cfg.rank1());
    const double d2 = to_double(cfg.rank2());
    BlockPriors bp;
    bp.p_block = cfg.eta1 / d1 + cfg.eta2 / d2;
    bp.eta_block_1 = cfg.eta1 / (d1 * bp.p_block);
    bp.eta_block_2 = cfg.eta2 / (d2 * bp.p_block);
    return bp;
}

} // namespace qudisc
