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
 * @file discrimination.hpp
 * Closed-form optimal unambiguous and minimum-error discrimination between
 * the two mean input states, block by block over the Jordan spectrum, and
 * the large-n limits Q0 / P0.
 *
 * Functions taking (spectrum, cfg) expect a canonical config (n_A >= n_C)
 * and the spectrum built from it. The solve_* entry points canonicalize
 * and report results in the caller's labeling.
 */
#pragma once

#include "qudisc/combinatorics.hpp"
#include "qudisc/errors.hpp"
#include "qudisc/spectrum.hpp"

#include <cmath>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace qudisc {

enum class Branch { low, middle, high };

inline std::string_view to_string(Branch b) {
    switch (b) {
    case Branch::low: return "LOW";
    case Branch::middle: return "MIDDLE";
    case Branch::high: return "HIGH";
    }
    return "?";
}

/// Failure parameter q1 on the eta1 > d_k branch.
///
/// `squared_overlap` (q1 = O_k^2, q2 = 1) is the optimum and the only value
/// consistent with Q_k = eta1 O_k^2/d1 + eta2/d2. `printed_overlap`
/// (q1 = O_k) is kept solely as a negative control for the POVM certification.
enum class HighBranchRule { squared_overlap, printed_overlap };

struct BranchBoundaries {
    double c = 0.0; ///< below: LOW branch
    double d = 0.0; ///< above: HIGH branch
};

struct QChoice {
    Branch branch = Branch::middle;
    double q1 = 1.0;
    double q2 = 1.0;
};

struct UnambiguousBlock {
    int k = 0;
    double overlap = 1.0;
    BigInt multiplicity;
    Branch branch = Branch::middle;
    double q1 = 1.0;
    double q2 = 1.0;
    double c = 0.0;
    double d = 0.0;
    double failure = 0.0; ///< Q_k, per Jordan pair
};

struct UnambiguousResult {
    std::vector<UnambiguousBlock> blocks;
    double total = 0.0; ///< Q^opt = sum_k d^k Q_k
    bool swapped = false;
};

struct MinErrorBlock {
    int k = 0;
    double overlap = 1.0;
    BigInt multiplicity;
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
};

struct MinErrorResult {
    std::vector<MinErrorBlock> blocks;
    double residual_eigenvalue = 0.0; ///< eigenvalue of Lambda on the unpaired directions
    BigInt residual_multiplicity;
    double p_error = 0.0; ///< P_ME
    bool swapped = false;
};

struct AsymptoticBounds {
    std::optional<double> q0; ///< only when n_A == n_C
    double p0 = 0.0;
};

namespace detail {

inline const JordanBlock& block_at(int k, const JordanSpectrum& s) {
    if (k < 0 || k > s.k_max) throw std::out_of_range("block index out of range");
    return s.blocks[static_cast<std::size_t>(k)];
}

inline void check_prior_endpoints(double eta1, Branch b) {
    if (b == Branch::middle && (eta1 <= 0.0 || eta1 >= 1.0)) {
        throw PreconditionError("middle branch requires 0 < eta1 < 1");
    }
}

} // namespace detail

/// c_k = d1 O^2 / (d2 + d1 O^2),  d_k = d1 / (d1 + d2 O^2); exact until the final rounding.
inline BranchBoundaries boundaries(int k, const JordanSpectrum& s, const ProblemConfig&) {
    const JordanBlock& b = detail::block_at(k, s);
    const BigRational d1(s.d1);
    const BigRational d2(s.d2);
    const BigRational& o2 = b.overlap_squared;
    return {to_double(d1 * o2 / (d2 + d1 * o2)), to_double(d1 / (d1 + d2 * o2))};
}

inline QChoice optimal_q(int k, const JordanSpectrum& s, const ProblemConfig& cfg,
                         HighBranchRule rule = HighBranchRule::squared_overlap) {
    const JordanBlock& b = detail::block_at(k, s);
    const auto [c, d] = boundaries(k, s, cfg);
    const double o2 = to_double(b.overlap_squared);
    const double o = b.overlap;
    QChoice q;
    if (cfg.eta1 < c) {
        q = {Branch::low, 1.0, o2};
    } else if (cfg.eta1 > d) {
        if (rule == HighBranchRule::squared_overlap) {
            q = {Branch::high, o2, 1.0};
        } else {
            q = {Branch::high, o, o2 / o};
        }
    } else {
        detail::check_prior_endpoints(cfg.eta1, Branch::middle);
        const double ratio = std::sqrt(cfg.eta2 * to_double(s.d1) / (cfg.eta1 * to_double(s.d2)));
        q = {Branch::middle, ratio * o, o / ratio};
    }
    return q;
}

/// Minimal failure Q_k of one Jordan pair.
inline double block_failure(int k, const JordanSpectrum& s, const ProblemConfig& cfg) {
    const JordanBlock& b = detail::block_at(k, s);
    const auto [c, d] = boundaries(k, s, cfg);
    const double d1 = to_double(s.d1);
    const double d2 = to_double(s.d2);
    const double o2 = to_double(b.overlap_squared);
    if (cfg.eta1 < c) return cfg.eta1 / d1 + cfg.eta2 * o2 / d2;
    if (cfg.eta1 > d) return cfg.eta1 * o2 / d1 + cfg.eta2 / d2;
    return 2.0 * std::sqrt(cfg.eta1 * cfg.eta2 / (d1 * d2)) * b.overlap;
}

/// Q^opt for the canonical config; the report is mapped back to the caller's
/// labeling when `canonical.swapped` is set.
inline UnambiguousResult total_failure(const JordanSpectrum& s, const CanonicalConfig& canonical,
                                       HighBranchRule rule = HighBranchRule::squared_overlap) {
    const ProblemConfig& cfg = canonical.config;
    UnambiguousResult r;
    r.swapped = canonical.swapped;
    for (const JordanBlock& b : s.blocks) {
        UnambiguousBlock ub;
        ub.k = b.k;
        ub.overlap = b.overlap;
        ub.multiplicity = b.multiplicity;
        const QChoice q = optimal_q(b.k, s, cfg, rule);
        const BranchBoundaries bd = boundaries(b.k, s, cfg);
        ub.branch = q.branch;
        ub.q1 = q.q1;
        ub.q2 = q.q2;
        ub.c = bd.c;
        ub.d = bd.d;
        ub.failure = block_failure(b.k, s, cfg);
        r.total += to_double(b.multiplicity) * ub.failure;
        if (canonical.swapped) {
            std::swap(ub.q1, ub.q2);
            if (ub.branch == Branch::low) {
                ub.branch = Branch::high;
            } else if (ub.branch == Branch::high) {
                ub.branch = Branch::low;
            }
            ub.c = 1.0 - bd.d;
            ub.d = 1.0 - bd.c;
        }
        r.blocks.push_back(std::move(ub));
    }
    return r;
}

inline UnambiguousResult total_failure(const JordanSpectrum& s, const ProblemConfig& canonical_cfg,
                                       HighBranchRule rule = HighBranchRule::squared_overlap) {
    return total_failure(s, CanonicalConfig{canonical_cfg, false}, rule);
}

inline UnambiguousResult solve_unambiguous(const ProblemConfig& cfg,
                                           HighBranchRule rule = HighBranchRule::squared_overlap) {
    const CanonicalConfig cc = canonicalize(cfg);
    return total_failure(jordan_spectrum(cc.config), cc, rule);
}

/// (1/d1) sum_k d^k O_k; defined for n_A == n_C at eta1 = eta2 = 1/2.
inline double equal_copies_failure(const JordanSpectrum& s, const ProblemConfig& cfg) {
    if (cfg.n_A != cfg.n_C) throw PreconditionError("equal-copies reduction requires n_A == n_C");
    if (std::abs(cfg.eta1 - 0.5) > kPriorSumTolerance || std::abs(cfg.eta2 - 0.5) > kPriorSumTolerance) {
        throw PreconditionError("equal-copies reduction requires eta1 = eta2 = 1/2");
    }
    double q = 0.0;
    for (const JordanBlock& b : s.blocks) {
        q += to_double(BigRational(b.multiplicity, s.d1)) * b.overlap;
    }
    return q;
}

/// Eigenvalues of eta2 |2><2|/d2 - eta1 |1><1|/d1 on one Jordan pair.
inline std::pair<double, double> minerror_eigenvalues(int k, const JordanSpectrum& s, const ProblemConfig& cfg) {
    const JordanBlock& b = detail::block_at(k, s);
    const double a1 = cfg.eta1 / to_double(s.d1);
    const double a2 = cfg.eta2 / to_double(s.d2);
    const double c_plus = a2 + a1;
    const double c_minus = a2 - a1;
    const double o2 = to_double(b.overlap_squared);
    const double sin2 = to_double(1 - b.overlap_squared);
    // c+^2 - (c+^2 - c-^2) O^2, written as a sum of non-negative terms
    const double root = std::sqrt(c_plus * c_plus * sin2 + c_minus * c_minus * o2);
    // lambda+ lambda- = -a1 a2 (1 - O^2); take the larger-magnitude root directly
    const double product = -a1 * a2 * sin2;
    double plus = 0.0;
    double minus = 0.0;
    if (c_minus >= 0.0) {
        plus = 0.5 * (c_minus + root);
        minus = plus > 0.0 ? product / plus : 0.0;
    } else {
        minus = 0.5 * (c_minus - root);
        plus = product / minus;
    }
    return {plus, minus};
}

inline MinErrorResult minerror_probability(const JordanSpectrum& s, const CanonicalConfig& canonical) {
    const ProblemConfig& cfg = canonical.config;
    MinErrorResult r;
    r.swapped = canonical.swapped;
    const double d2 = to_double(s.d2);
    double trace_norm_paired = 0.0;
    for (const JordanBlock& b : s.blocks) {
        auto [plus, minus] = minerror_eigenvalues(b.k, s, cfg);
        trace_norm_paired += to_double(b.multiplicity) * (plus - minus);
        if (canonical.swapped) {
            // Lambda changes sign under the relabeling
            std::tie(plus, minus) = std::pair{-minus, -plus};
        }
        r.blocks.push_back({b.k, b.overlap, b.multiplicity, plus, minus});
    }
    r.residual_multiplicity = s.d2 - s.d1;
    r.residual_eigenvalue = canonical.swapped ? -cfg.eta2 / d2 : cfg.eta2 / d2;
    // (1 - Tr|Lambda|)/2 with Tr|Lambda| = paired part + (d2 - d1) eta2/d2
    r.p_error = 0.5 * (cfg.eta1 + cfg.eta2 * to_double(BigRational(s.d1, s.d2)) - trace_norm_paired);
    return r;
}

inline MinErrorResult minerror_probability(const JordanSpectrum& s, const ProblemConfig& canonical_cfg) {
    return minerror_probability(s, CanonicalConfig{canonical_cfg, false});
}

inline MinErrorResult solve_minerror(const ProblemConfig& cfg) {
    const CanonicalConfig cc = canonicalize(cfg);
    return minerror_probability(jordan_spectrum(cc.config), cc);
}

/// Q0 = Gamma(nA+1) Gamma(nB/2+1) / Gamma(nA+nB/2+1), the n -> infinity limit of Q^opt for n_A == n_C.
inline double bound_Q0(const ProblemConfig& cfg) {
    if (cfg.n_A != cfg.n_C) throw PreconditionError("Q0 is defined only for n_A == n_C");
    const double lg = log_gamma_half(HalfInt::integer(cfg.n_A + 1)) +
                      log_gamma_half(HalfInt::from_twice(cfg.n_B + 2)) -
                      log_gamma_half(HalfInt::from_twice(2 * cfg.n_A + cfg.n_B + 2));
    return std::exp(lg);
}

/// P0 = (1 - sum_k w_k sqrt(1 - O_k^2)) / 2 with
/// w_k = (N-2k+1) n1! nC! / ((N-k+1) k! (N-k)!), the n -> infinity limit of d^k/d1.
inline double bound_P0(const ProblemConfig& cfg) {
    const ProblemConfig c = canonicalize(cfg).config;
    const int N = c.total_copies();
    const BigInt top = factorial(c.n1()) * factorial(c.n_C);
    double sum = 0.0;
    for (int k = 0; k <= c.k_max(); ++k) {
        const BigRational weight(BigInt(N - 2 * k + 1) * top,
                                 BigInt(N - k + 1) * factorial(k) * factorial(N - k));
        sum += to_double(weight) * std::sqrt(to_double(1 - overlap_squared(k, c)));
    }
    return 0.5 * (1.0 - sum);
}

inline AsymptoticBounds asymptotic_bounds(const ProblemConfig& cfg) {
    AsymptoticBounds b;
    if (cfg.n_A == cfg.n_C) b.q0 = bound_Q0(cfg);
    b.p0 = bound_P0(cfg);
    return b;
}

} // namespace qudisc
