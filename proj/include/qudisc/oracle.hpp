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
 * @file oracle.hpp
 * Brute-force dense-matrix model of the discrimination problem.
 *
 * Nothing in here uses the Jordan-spectrum closed forms to build anything:
 * the mean states come from explicit symmetrizers on the n^N-dimensional
 * tensor space (sites ordered A, B, C, most significant first), angles from
 * an SVD of the support bases, and probabilities from traces. The closed
 * forms only enter certify_povm(), as the (q1, q2) parameters to assemble
 * and the Q^opt value to compare against.
 */
#pragma once

#include "qudisc/combinatorics.hpp"
#include "qudisc/discrimination.hpp"
#include "qudisc/errors.hpp"
#include "qudisc/linalg.hpp"
#include "qudisc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qudisc {

/// Eigenvalues of rho above this are counted in the support.
inline constexpr double kSupportThreshold = 1e-9;
/// Principal-angle cosines closer than this form one group.
inline constexpr double kAngleGroupTolerance = 1e-7;
inline constexpr std::size_t kDefaultOperatorCap = 4096;
inline constexpr std::size_t kDefaultCertificationCap = 1024;

/// Dimension cap for dense operators; QUDISC_MAX_DIM overrides the default.
inline std::size_t default_operator_cap() {
    if (const char* env = std::getenv("QUDISC_MAX_DIM")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return kDefaultOperatorCap;
}

/// n^m, saturating at SIZE_MAX.
inline std::size_t tensor_dimension(int n, int m) {
    std::size_t d = 1;
    for (int i = 0; i < m; ++i) {
        if (d > SIZE_MAX / static_cast<std::size_t>(n)) return SIZE_MAX;
        d *= static_cast<std::size_t>(n);
    }
    return d;
}

namespace detail {

inline void require_cap(std::size_t dim, std::size_t cap, const char* what) {
    if (dim > cap) {
        throw CapExceeded(std::string(what) + ": dimension " + std::to_string(dim) + " exceeds cap " +
                          std::to_string(cap));
    }
}

/// Base-n digits of `index`, most significant site first.
inline std::vector<int> site_digits(std::size_t index, int n, int m) {
    std::vector<int> digits(static_cast<std::size_t>(m));
    for (int s = m - 1; s >= 0; --s) {
        digits[static_cast<std::size_t>(s)] = static_cast<int>(index % static_cast<std::size_t>(n));
        index /= static_cast<std::size_t>(n);
    }
    return digits;
}

} // namespace detail

/**
 * Projector onto the symmetric subspace of (C^n)^{(x) m}:
 * (1/m!) sum over site permutations.
 *
 * A basis string is sent by the m! permutations onto its distinct
 * rearrangements, each hit equally often, so column j is the uniform
 * average over the rearrangements of j.
 */
inline RealMatrix symmetrizer(int m, int n, std::size_t cap = default_operator_cap()) {
    if (m < 1 || n < 1) throw std::invalid_argument("symmetrizer: m and n must be >= 1");
    const std::size_t dim = tensor_dimension(n, m);
    detail::require_cap(dim, cap, "symmetrizer");
    std::map<std::vector<int>, std::vector<std::size_t>> orbits;
    for (std::size_t idx = 0; idx < dim; ++idx) {
        std::vector<int> digits = detail::site_digits(idx, n, m);
        std::sort(digits.begin(), digits.end());
        orbits[digits].push_back(idx);
    }
    RealMatrix p(dim, dim);
    for (const auto& [key, members] : orbits) {
        const double w = 1.0 / static_cast<double>(members.size());
        for (std::size_t j : members)
            for (std::size_t i : members) p(i, j) = w;
    }
    return p;
}

/// Orthonormal basis (columns) of the eigenvectors of a Hermitian operator
/// with eigenvalue above `threshold`.
template <typename T>
Matrix<T> support_basis(const Matrix<T>& op, double threshold = kSupportThreshold) {
    const EigenSystem<T> es = hermitian_eig(op);
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < es.values.size(); ++c) {
        if (es.values[c] > threshold) keep.push_back(c);
    }
    Matrix<T> b(op.rows(), keep.size());
    for (std::size_t c = 0; c < keep.size(); ++c) {
        auto src = es.vectors.col(keep[c]);
        std::copy(src.begin(), src.end(), b.col(c).begin());
    }
    return b;
}

struct MeanStates {
    RealMatrix rho1; ///< 1^[n1] (x) 1^[nC], normalized
    RealMatrix rho2; ///< 1^[nA] (x) 1^[n2], normalized
};

/// The two Haar-averaged input states on the full n^N space.
inline MeanStates mean_states(const ProblemConfig& cfg, std::size_t cap = default_operator_cap()) {
    validate(cfg);
    detail::require_cap(tensor_dimension(cfg.n, cfg.total_copies()), cap, "mean_states");
    MeanStates s;
    s.rho1 = kron(symmetrizer(cfg.n1(), cfg.n, cap), symmetrizer(cfg.n_C, cfg.n, cap));
    s.rho2 = kron(symmetrizer(cfg.n_A, cfg.n, cap), symmetrizer(cfg.n2(), cfg.n, cap));
    s.rho1 *= 1.0 / trace(s.rho1);
    s.rho2 *= 1.0 / trace(s.rho2);
    return s;
}

/// Orthonormal bases of supp(rho1) and supp(rho2), columns in the full tensor space.
struct SupportBases {
    RealMatrix b1;
    RealMatrix b2;
};

/// Supports from diagonalizing the full mean states.
inline SupportBases support_bases(const MeanStates& states) {
    return {support_basis(states.rho1), support_basis(states.rho2)};
}

/// Supports as Kronecker products of the symmetric-subspace bases of the two
/// factors; spans the same subspaces as support_bases(mean_states(cfg)) at a
/// fraction of the cost, since only the factor symmetrizers are diagonalized.
inline SupportBases factored_support_bases(const ProblemConfig& cfg, std::size_t cap = default_operator_cap()) {
    validate(cfg);
    detail::require_cap(tensor_dimension(cfg.n, cfg.total_copies()), cap, "support bases");
    auto sym_basis = [&](int m) { return support_basis(symmetrizer(m, cfg.n, cap)); };
    return {kron(sym_basis(cfg.n1()), sym_basis(cfg.n_C)), kron(sym_basis(cfg.n_A), sym_basis(cfg.n2()))};
}

struct AngleGroup {
    double cosine = 0.0;
    std::size_t multiplicity = 0;
};

struct PrincipalAngles {
    std::vector<double> cosines;   ///< descending, one per Jordan pair
    std::vector<AngleGroup> groups; ///< descending
    std::size_t unpaired1 = 0;     ///< supp(rho1) directions orthogonal to supp(rho2)
    std::size_t unpaired2 = 0;
};

/// Group descending cosines; a value joins the current group while within
/// `tolerance` of the group's first member.
inline std::vector<AngleGroup> group_cosines(const std::vector<double>& descending,
                                             double tolerance = kAngleGroupTolerance) {
    std::vector<AngleGroup> groups;
    double anchor = 0.0;
    for (double c : descending) {
        if (groups.empty() || anchor - c > tolerance) {
            groups.push_back({c, 0});
            anchor = c;
        }
        ++groups.back().multiplicity;
    }
    return groups;
}

/// Jordan pairs f_i in supp(rho1), g_i in supp(rho2) with <f_i|g_j> = delta_ij sigma_i,
/// plus the unpaired remainder of the larger support.
struct JordanPairs {
    RealMatrix f;
    RealMatrix g;
    std::vector<double> sigma; ///< descending, clamped to [0, 1]
    RealMatrix unpaired1;
    RealMatrix unpaired2;
};

namespace detail {

inline RealMatrix select_columns(const RealMatrix& m, std::size_t from, std::size_t to) {
    RealMatrix out(m.rows(), to - from);
    for (std::size_t c = from; c < to; ++c) {
        auto src = m.col(c);
        std::copy(src.begin(), src.end(), out.col(c - from).begin());
    }
    return out;
}

/// Eigenvectors of a symmetric matrix sorted by descending eigenvalue.
inline EigenSystem<double> descending_eig(const RealMatrix& m) {
    EigenSystem<double> es = hermitian_eig(m);
    std::reverse(es.values.begin(), es.values.end());
    const std::size_t n = es.vectors.cols();
    for (std::size_t c = 0; c < n / 2; ++c) {
        auto a = es.vectors.col(c);
        auto b = es.vectors.col(n - 1 - c);
        std::swap_ranges(a.begin(), a.end(), b.begin());
    }
    return es;
}

/// SVD of small^T large via the eigen-decomposition of (small^T large)^T (small^T large).
/// Returns pairs (x_i in span(small), y_i in span(large)) and the unpaired y's.
inline void pair_supports(const RealMatrix& small, const RealMatrix& large, RealMatrix& x, RealMatrix& y,
                          std::vector<double>& sigma, RealMatrix& rest) {
    const RealMatrix m = adjoint_multiply(small, large); // s x l
    const EigenSystem<double> es = descending_eig(adjoint_multiply(m, m));
    const std::size_t s = small.cols();
    const std::size_t l = large.cols();
    const RealMatrix ybasis = multiply(large, es.vectors); // all l directions of span(large)
    y = select_columns(ybasis, 0, s);
    rest = select_columns(ybasis, s, l);
    sigma.assign(s, 0.0);
    RealMatrix coeff(s, s); // columns: M v_i / sigma_i, in small's coordinates
    for (std::size_t i = 0; i < s; ++i) {
        sigma[i] = std::clamp(std::sqrt(std::max(es.values[i], 0.0)), 0.0, 1.0);
        std::vector<double> mv(s, 0.0);
        for (std::size_t k = 0; k < l; ++k) {
            const double vk = es.vectors(k, i);
            for (std::size_t r = 0; r < s; ++r) mv[r] += m(r, k) * vk;
        }
        const double nrm = norm2<double>(mv);
        for (std::size_t r = 0; r < s; ++r) coeff(r, i) = nrm > 0.0 ? mv[r] / nrm : 0.0;
    }
    x = multiply(small, coeff);
}

} // namespace detail

inline JordanPairs jordan_pairs(const SupportBases& bases) {
    JordanPairs jp;
    if (bases.b1.cols() <= bases.b2.cols()) {
        detail::pair_supports(bases.b1, bases.b2, jp.f, jp.g, jp.sigma, jp.unpaired2);
        jp.unpaired1 = RealMatrix(bases.b1.rows(), 0);
    } else {
        detail::pair_supports(bases.b2, bases.b1, jp.g, jp.f, jp.sigma, jp.unpaired1);
        jp.unpaired2 = RealMatrix(bases.b2.rows(), 0);
    }
    return jp;
}

inline PrincipalAngles principal_angles(const SupportBases& bases) {
    const JordanPairs jp = jordan_pairs(bases);
    return {jp.sigma, group_cosines(jp.sigma), jp.unpaired1.cols(), jp.unpaired2.cols()};
}

/// Principal angles between the supports of two states.
inline PrincipalAngles principal_angles(const RealMatrix& rho1, const RealMatrix& rho2) {
    return principal_angles(SupportBases{support_basis(rho1), support_basis(rho2)});
}

struct LambdaSpectrum {
    std::vector<double> eigenvalues; ///< ascending, on supp(rho1) + supp(rho2)
    std::size_t zero_multiplicity = 0; ///< remaining directions of the tensor space
    double trace_norm = 0.0;
    double p_error = 0.0; ///< (1 - Tr|Lambda|) / 2
};

struct PovmCertificate {
    double min_eig_pi0 = 0.0;
    double min_eig_pi1 = 0.0;
    double min_eig_pi2 = 0.0;
    double completeness_defect = 0.0; ///< max |Pi0 + Pi1 + Pi2 - 1_T|
    double error_1_as_2 = 0.0;        ///< Tr(rho1 Pi2)
    double error_2_as_1 = 0.0;        ///< Tr(rho2 Pi1)
    double failure = 0.0;             ///< eta1 Tr(rho1 Pi0) + eta2 Tr(rho2 Pi0)
    double expected_failure = 0.0;    ///< closed-form Q^opt
    std::size_t perp_rank = 0;        ///< rank of the unpaired projector
    bool passed = false;
    std::string failure_reason;

    [[nodiscard]] double failure_residual() const { return std::abs(failure - expected_failure); }
};

/**
 * Dense model of one geometry (n, n_A, n_B, n_C): support bases, Jordan pairs,
 * and an orthonormal basis of H_T = supp(rho1) + supp(rho2). Every operator
 * the checks need is supported on H_T, so spectra and traces are taken in
 * that basis; the rest of the tensor space contributes only zeros.
 */
class DenseModel {
  public:
    explicit DenseModel(const ProblemConfig& cfg, std::size_t cap = default_operator_cap())
        : cfg_(cfg), bases_(factored_support_bases(cfg, cap)) {
        init();
    }

    DenseModel(const ProblemConfig& cfg, SupportBases bases) : cfg_(cfg), bases_(std::move(bases)) { init(); }

    [[nodiscard]] const ProblemConfig& config() const noexcept { return cfg_; }
    [[nodiscard]] const SupportBases& bases() const noexcept { return bases_; }
    [[nodiscard]] const JordanPairs& pairs() const noexcept { return pairs_; }
    [[nodiscard]] std::size_t tensor_dim() const noexcept { return bases_.b1.rows(); }
    [[nodiscard]] std::size_t total_support_dim() const noexcept { return w_.cols(); }
    [[nodiscard]] std::size_t rank1() const noexcept { return bases_.b1.cols(); }
    [[nodiscard]] std::size_t rank2() const noexcept { return bases_.b2.cols(); }

    [[nodiscard]] PrincipalAngles principal_angles() const {
        return {pairs_.sigma, group_cosines(pairs_.sigma), pairs_.unpaired1.cols(), pairs_.unpaired2.cols()};
    }

    /// Spectrum of Lambda = eta2 rho2 - eta1 rho1.
    [[nodiscard]] LambdaSpectrum lambda_spectrum(double eta1) const {
        const double eta2 = 1.0 - eta1;
        RealMatrix lambda = rho2_w_ * eta2;
        lambda -= rho1_w_ * eta1;
        LambdaSpectrum ls;
        ls.eigenvalues = hermitian_eigenvalues(lambda);
        ls.zero_multiplicity = tensor_dim() - total_support_dim();
        for (double v : ls.eigenvalues) ls.trace_norm += std::abs(v);
        ls.p_error = 0.5 * (1.0 - ls.trace_norm);
        return ls;
    }

    /// Assemble Pi0, Pi1, Pi2 from the Jordan pairs with the closed-form (q1, q2)
    /// of each block and check positivity, completeness, zero error, and Q^opt.
    [[nodiscard]] PovmCertificate certify_povm(double eta1,
                                               HighBranchRule rule = HighBranchRule::squared_overlap) const {
        ProblemConfig cfg = cfg_;
        cfg.eta1 = eta1;
        cfg.eta2 = 1.0 - eta1;
        const UnambiguousResult closed = solve_unambiguous(cfg, rule);

        PovmCertificate cert;
        cert.expected_failure = closed.total;
        const std::size_t r = total_support_dim();
        RealMatrix pi0(r, r);
        RealMatrix pi1(r, r);
        RealMatrix pi2(r, r);
        std::vector<double> fw(r);
        std::vector<double> gw(r);
        std::vector<double> fperp(r);
        std::vector<double> gperp(r);

        for (std::size_t i = 0; i < pairs_.sigma.size(); ++i) {
            const double sigma = pairs_.sigma[i];
            const UnambiguousBlock* block = nullptr;
            for (const UnambiguousBlock& b : closed.blocks) {
                if (std::abs(b.overlap - sigma) <= kAngleGroupTolerance) block = &b;
            }
            if (block == nullptr) {
                cert.failure_reason = "Jordan cosine " + std::to_string(sigma) + " matches no closed-form block";
                return cert;
            }
            copy_column(f_w_, i, fw);
            copy_column(g_w_, i, gw);
            if (block->k == 0) {
                // identical Jordan directions: inconclusive outcome only
                rank_one_update(pi0, fw, 1.0);
                continue;
            }
            const double sin2 = 1.0 - sigma * sigma;
            const double inv = 1.0 / std::sqrt(sin2);
            for (std::size_t a = 0; a < r; ++a) {
                fperp[a] = (gw[a] - sigma * fw[a]) * inv; // orthogonal to f: fires on state 2 only
                gperp[a] = (fw[a] - sigma * gw[a]) * inv; // orthogonal to g: fires on state 1 only
            }
            const double w1 = (1.0 - block->q1) / sin2;
            const double w2 = (1.0 - block->q2) / sin2;
            rank_one_update(pi1, gperp, w1);
            rank_one_update(pi2, fperp, w2);
            rank_one_update(pi0, fw, 1.0);
            rank_one_update(pi0, fperp, 1.0 - w2);
            rank_one_update(pi0, gperp, -w1);
        }
        for (std::size_t c = 0; c < u1_w_.cols(); ++c) {
            copy_column(u1_w_, c, fw);
            rank_one_update(pi1, fw, 1.0);
        }
        for (std::size_t c = 0; c < u2_w_.cols(); ++c) {
            copy_column(u2_w_, c, fw);
            rank_one_update(pi2, fw, 1.0);
        }
        cert.perp_rank = u1_w_.cols() + u2_w_.cols();

        RealMatrix sum = pi0 + pi1 + pi2;
        for (std::size_t a = 0; a < r; ++a) sum(a, a) -= 1.0;
        cert.completeness_defect = max_abs(sum);
        auto min_eig = [](const RealMatrix& m) {
            const auto ev = hermitian_eigenvalues(m);
            return ev.empty() ? 0.0 : ev.front();
        };
        cert.min_eig_pi0 = min_eig(pi0);
        cert.min_eig_pi1 = min_eig(pi1);
        cert.min_eig_pi2 = min_eig(pi2);
        cert.error_1_as_2 = trace_product(rho1_w_, pi2);
        cert.error_2_as_1 = trace_product(rho2_w_, pi1);
        cert.failure = cfg.eta1 * trace_product(rho1_w_, pi0) + cfg.eta2 * trace_product(rho2_w_, pi0);

        constexpr double kOperatorTolerance = 1e-10;
        constexpr double kFailureTolerance = 1e-9;
        if (std::min({cert.min_eig_pi0, cert.min_eig_pi1, cert.min_eig_pi2}) < -kOperatorTolerance) {
            cert.failure_reason = "POVM element not positive semidefinite";
        } else if (cert.completeness_defect > kOperatorTolerance) {
            cert.failure_reason = "Pi0 + Pi1 + Pi2 differs from the identity on H_T";
        } else if (cert.error_1_as_2 > kOperatorTolerance || cert.error_2_as_1 > kOperatorTolerance) {
            cert.failure_reason = "conclusive outcome fires on the wrong state";
        } else if (cert.failure_residual() > kFailureTolerance) {
            cert.failure_reason = "failure probability differs from closed-form Q^opt";
        } else {
            cert.passed = true;
        }
        return cert;
    }

  private:
    void init() {
        pairs_ = jordan_pairs(bases_);
        // orthonormal basis of H_T from the Gram matrix of [b1 b2]
        const std::size_t d1 = bases_.b1.cols();
        const std::size_t d2 = bases_.b2.cols();
        const std::size_t dim = tensor_dim();
        RealMatrix joint(dim, d1 + d2);
        for (std::size_t c = 0; c < d1; ++c) {
            auto src = bases_.b1.col(c);
            std::copy(src.begin(), src.end(), joint.col(c).begin());
        }
        for (std::size_t c = 0; c < d2; ++c) {
            auto src = bases_.b2.col(c);
            std::copy(src.begin(), src.end(), joint.col(d1 + c).begin());
        }
        const EigenSystem<double> gram = detail::descending_eig(adjoint_multiply(joint, joint));
        // Gram eigenvalues are 1 +- sigma_i and 1; coincident directions give 0
        constexpr double kRankThreshold = 1e-6;
        std::size_t rank = 0;
        while (rank < gram.values.size() && gram.values[rank] > kRankThreshold) ++rank;
        RealMatrix coeff(d1 + d2, rank);
        for (std::size_t c = 0; c < rank; ++c) {
            const double s = 1.0 / std::sqrt(gram.values[c]);
            for (std::size_t a = 0; a < d1 + d2; ++a) coeff(a, c) = gram.vectors(a, c) * s;
        }
        w_ = multiply(joint, coeff);

        const RealMatrix b1w = adjoint_multiply(w_, bases_.b1);
        const RealMatrix b2w = adjoint_multiply(w_, bases_.b2);
        rho1_w_ = multiply(b1w, adjoint(b1w));
        rho1_w_ *= 1.0 / static_cast<double>(d1);
        rho2_w_ = multiply(b2w, adjoint(b2w));
        rho2_w_ *= 1.0 / static_cast<double>(d2);
        f_w_ = adjoint_multiply(w_, pairs_.f);
        g_w_ = adjoint_multiply(w_, pairs_.g);
        u1_w_ = adjoint_multiply(w_, pairs_.unpaired1);
        u2_w_ = adjoint_multiply(w_, pairs_.unpaired2);
    }

    static void copy_column(const RealMatrix& m, std::size_t c, std::vector<double>& out) {
        auto src = m.col(c);
        std::copy(src.begin(), src.end(), out.begin());
    }

    static void rank_one_update(RealMatrix& m, const std::vector<double>& v, double w) {
        if (w == 0.0) return;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const double wj = w * v[j];
            auto col = m.col(j);
            for (std::size_t i = 0; i < m.rows(); ++i) col[i] += v[i] * wj;
        }
    }

    static double trace_product(const RealMatrix& a, const RealMatrix& b) {
        double t = 0.0;
        for (std::size_t i = 0; i < a.data().size(); ++i) t += a.data()[i] * b.data()[i];
        return t;
    }

    ProblemConfig cfg_;
    SupportBases bases_;
    JordanPairs pairs_;
    RealMatrix w_; ///< orthonormal basis of H_T, tensor-space columns
    RealMatrix rho1_w_;
    RealMatrix rho2_w_;
    RealMatrix f_w_;
    RealMatrix g_w_;
    RealMatrix u1_w_;
    RealMatrix u2_w_;
};

/// Lambda spectrum of a config, computed on H_T.
inline LambdaSpectrum lambda_spectrum(const ProblemConfig& cfg, std::size_t cap = default_operator_cap()) {
    return DenseModel(cfg, cap).lambda_spectrum(cfg.eta1);
}

/// Lambda spectrum from diagonalizing the full n^N x n^N operator.
inline LambdaSpectrum lambda_spectrum_full(const ProblemConfig& cfg, std::size_t cap = default_operator_cap()) {
    const MeanStates s = mean_states(cfg, cap);
    RealMatrix lambda = s.rho2 * cfg.eta2;
    lambda -= s.rho1 * cfg.eta1;
    LambdaSpectrum ls;
    ls.eigenvalues = hermitian_eigenvalues(lambda);
    for (double v : ls.eigenvalues) {
        ls.trace_norm += std::abs(v);
    }
    ls.p_error = 0.5 * (1.0 - ls.trace_norm);
    return ls;
}

inline PovmCertificate certify_povm(const ProblemConfig& cfg, HighBranchRule rule = HighBranchRule::squared_overlap,
                                    std::size_t cap = default_operator_cap()) {
    return DenseModel(cfg, cap).certify_povm(cfg.eta1, rule);
}

/// Empirical mean of [psi^{(x) m}] over Haar-random pure states of C^n.
///
/// psi is a normalized vector of i.i.d. standard complex normals. The stream
/// is a function of (seed, m, n) only.
inline DenseHermitian haar_average(int m, int n, std::size_t samples, std::uint64_t seed,
                                   std::size_t cap = default_operator_cap()) {
    if (m < 1 || n < 1) throw std::invalid_argument("haar_average: m and n must be >= 1");
    if (samples < 1) throw std::invalid_argument("haar_average: need at least one sample");
    const std::size_t dim = tensor_dimension(n, m);
    detail::require_cap(dim, cap, "haar_average");

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(n)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;

    DenseHermitian acc(dim, dim);
    std::vector<cplx> psi(static_cast<std::size_t>(n));
    std::vector<cplx> power(dim);
    std::vector<cplx> next(dim);
    for (std::size_t s = 0; s < samples; ++s) {
        double nrm = 0.0;
        for (auto& z : psi) {
            const double re = normal(rng);
            const double im = normal(rng);
            z = cplx(re, im);
            nrm += re * re + im * im;
        }
        const double inv = 1.0 / std::sqrt(nrm);
        for (auto& z : psi) z *= inv;

        std::size_t len = 1;
        power[0] = 1.0;
        for (int site = 0; site < m; ++site) {
            for (std::size_t a = 0; a < len; ++a)
                for (std::size_t b = 0; b < psi.size(); ++b) next[a * psi.size() + b] = power[a] * psi[b];
            len *= psi.size();
            std::copy(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(len), power.begin());
        }
        // upper triangle only; mirrored below
        for (std::size_t j = 0; j < dim; ++j) {
            const cplx pj = std::conj(power[j]);
            auto col = acc.col(j);
            for (std::size_t i = 0; i <= j; ++i) col[i] += power[i] * pj;
        }
    }
    const double scale = 1.0 / static_cast<double>(samples);
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t i = 0; i <= j; ++i) {
            acc(i, j) *= scale;
            acc(j, i) = std::conj(acc(i, j));
        }
    return acc;
}

/// ||haar_average - 1^[m] / Tr 1^[m]||_F.
inline double haar_deviation(int m, int n, std::size_t samples, std::uint64_t seed,
                             std::size_t cap = default_operator_cap()) {
    DenseHermitian avg = haar_average(m, n, samples, seed, cap);
    const RealMatrix p = symmetrizer(m, n, cap);
    const double inv_rank = 1.0 / trace(p);
    for (std::size_t j = 0; j < p.cols(); ++j)
        for (std::size_t i = 0; i < p.rows(); ++i) avg(i, j) -= p(i, j) * inv_rank;
    return frobenius_norm(avg);
}

} // namespace qudisc
