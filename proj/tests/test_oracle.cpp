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

#include "qudisc/oracle.hpp"
#include "qudisc/verify.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

using namespace qudisc;

namespace {

/// Orthogonal projector onto the column span of an orthonormal basis.
RealMatrix projector(const RealMatrix& basis) { return multiply(basis, adjoint(basis)); }

std::size_t count_near(const std::vector<double>& values, double target, double tol) {
    return static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [&](double v) { return std::abs(v - target) <= tol; }));
}

} // namespace

TEST(symmetrizer, examples) {
    EXPECT_EQ(max_abs(symmetrizer(1, 3) - RealMatrix::identity(3)), 0.0);
    EXPECT_NEAR(trace(symmetrizer(2, 2)), 3.0, 1e-14);
    const RealMatrix p3 = symmetrizer(3, 2);
    EXPECT_NEAR(trace(p3), 4.0, 1e-14);
    EXPECT_LE(max_abs(multiply(p3, p3) - p3), 1e-12);
    const auto ev = hermitian_eigenvalues(symmetrizer(2, 2));
    EXPECT_EQ(count_near(ev, 1.0, 1e-12), 3u);
    EXPECT_EQ(count_near(ev, 0.0, 1e-12), 1u);
}

TEST(symmetrizer, matches_permutation_average) {
    for (int m = 1; m <= 4; ++m)
        for (int n = 2; n <= 4; ++n) {
            EXPECT_LE(max_abs(symmetrizer(m, n) - reference::symmetrizer_by_permutations(m, n)), 1e-14)
                << m << " " << n;
        }
}

TEST(symmetrizer, idempotent_with_symmetric_subspace_trace) {
    for (int m = 1; m <= 5; ++m)
        for (int n = 2; n <= 4; ++n) {
            if (tensor_dimension(n, m) > 256) continue;
            const RealMatrix p = symmetrizer(m, n);
            EXPECT_LE(max_abs(multiply(p, p) - p), 1e-12);
            EXPECT_EQ(hermiticity_defect(p), 0.0);
            EXPECT_NEAR(trace(p), to_double(unitary_dim(Partition::row(m), n)), 1e-10);
        }
}

TEST(symmetrizer, respects_cap) {
    EXPECT_THROW(symmetrizer(5, 4, 1000), CapExceeded);
    EXPECT_NO_THROW(symmetrizer(5, 4, 1024));
    EXPECT_THROW(symmetrizer(0, 2), std::invalid_argument);
}

TEST(tensor_dimension, saturates) {
    EXPECT_EQ(tensor_dimension(4, 5), 1024u);
    EXPECT_EQ(tensor_dimension(1000, 100), SIZE_MAX);
}

TEST(mean_states, all_ones_qubits) {
    const MeanStates s = mean_states(ProblemConfig::make(2, 1, 1, 1));
    for (const RealMatrix* rho : {&s.rho1, &s.rho2}) {
        const auto ev = hermitian_eigenvalues(*rho);
        ASSERT_EQ(ev.size(), 8u);
        EXPECT_EQ(count_near(ev, 1.0 / 6.0, 1e-12), 6u);
        EXPECT_EQ(count_near(ev, 0.0, 1e-12), 2u);
        EXPECT_NEAR(trace(*rho), 1.0, 1e-14);
    }
}

TEST(mean_states, ranks_and_positivity) {
    const MeanStates s = mean_states(ProblemConfig::make(2, 2, 1, 1));
    const auto ev1 = hermitian_eigenvalues(s.rho1);
    const auto ev2 = hermitian_eigenvalues(s.rho2);
    EXPECT_EQ(count_near(ev1, 1.0 / 8.0, 1e-12), 8u);
    EXPECT_EQ(count_near(ev2, 1.0 / 9.0, 1e-12), 9u);
    EXPECT_GE(ev1.front(), -1e-12);
    EXPECT_GE(ev2.front(), -1e-12);
    EXPECT_THROW(mean_states(ProblemConfig::make(4, 2, 2, 2), 1024), CapExceeded);
}

TEST(support_bases, factored_matches_full_diagonalization) {
    for (const auto& cfg : {ProblemConfig::make(2, 1, 1, 1), ProblemConfig::make(2, 2, 1, 1),
                            ProblemConfig::make(3, 1, 2, 1), ProblemConfig::make(2, 1, 2, 3)}) {
        const SupportBases full = support_bases(mean_states(cfg));
        const SupportBases fact = factored_support_bases(cfg);
        EXPECT_EQ(full.b1.cols(), fact.b1.cols());
        EXPECT_EQ(full.b2.cols(), fact.b2.cols());
        EXPECT_LE(max_abs(projector(full.b1) - projector(fact.b1)), 1e-12);
        EXPECT_LE(max_abs(projector(full.b2) - projector(fact.b2)), 1e-12);
    }
}

TEST(principal_angles, identical_states) {
    const MeanStates s = mean_states(ProblemConfig::make(2, 1, 2, 1));
    const PrincipalAngles a = principal_angles(s.rho1, s.rho1);
    ASSERT_EQ(a.groups.size(), 1u);
    EXPECT_NEAR(a.groups[0].cosine, 1.0, 1e-12);
    EXPECT_EQ(a.groups[0].multiplicity, 8u);
    EXPECT_EQ(a.unpaired1 + a.unpaired2, 0u);
}

TEST(principal_angles, examples) {
    const MeanStates ones = mean_states(ProblemConfig::make(2, 1, 1, 1));
    const PrincipalAngles a = principal_angles(ones.rho1, ones.rho2);
    ASSERT_EQ(a.groups.size(), 2u);
    EXPECT_NEAR(a.groups[0].cosine, 1.0, 1e-12);
    EXPECT_EQ(a.groups[0].multiplicity, 4u);
    EXPECT_NEAR(a.groups[1].cosine, 0.5, 1e-12);
    EXPECT_EQ(a.groups[1].multiplicity, 2u);

    const MeanStates uneven = mean_states(ProblemConfig::make(2, 2, 1, 1));
    const PrincipalAngles b = principal_angles(uneven.rho1, uneven.rho2);
    ASSERT_EQ(b.groups.size(), 2u);
    EXPECT_EQ(b.groups[0].multiplicity, 5u);
    EXPECT_NEAR(b.groups[1].cosine, std::sqrt(1.0 / 3.0), 1e-12);
    EXPECT_EQ(b.groups[1].multiplicity, 3u);
    EXPECT_EQ(b.unpaired1, 0u);
    EXPECT_EQ(b.unpaired2, 1u);
}

TEST(principal_angles, full_and_factored_routes_agree) {
    for (const auto& cfg : verification_grid({2, 3}, 3, 128)) {
        const MeanStates s = mean_states(cfg);
        const PrincipalAngles full = principal_angles(s.rho1, s.rho2);
        const PrincipalAngles fact = DenseModel(cfg).principal_angles();
        ASSERT_EQ(full.cosines.size(), fact.cosines.size()) << describe(cfg);
        for (std::size_t i = 0; i < full.cosines.size(); ++i) EXPECT_NEAR(full.cosines[i], fact.cosines[i], 1e-10);
        EXPECT_EQ(full.unpaired1, fact.unpaired1);
        EXPECT_EQ(full.unpaired2, fact.unpaired2);
    }
}

TEST(principal_angles, grouping) {
    const auto g = group_cosines({1.0, 1.0 - 1e-9, 0.5 + 5e-8, 0.5, 0.2});
    ASSERT_EQ(g.size(), 3u);
    EXPECT_EQ(g[0].multiplicity, 2u);
    EXPECT_EQ(g[1].multiplicity, 2u);
    EXPECT_EQ(g[2].multiplicity, 1u);
    EXPECT_TRUE(group_cosines({}).empty());
}

TEST(lambda_spectrum, all_ones_equal_priors) {
    const LambdaSpectrum ls = lambda_spectrum(ProblemConfig::make(2, 1, 1, 1));
    const double e = std::sqrt(3.0) / 24.0;
    EXPECT_EQ(count_near(ls.eigenvalues, e, 1e-12), 2u);
    EXPECT_EQ(count_near(ls.eigenvalues, -e, 1e-12), 2u);
    EXPECT_EQ(count_near(ls.eigenvalues, 0.0, 1e-12) + ls.zero_multiplicity, 4u);
    EXPECT_NEAR(ls.p_error, 0.5 - std::sqrt(3.0) / 12.0, 1e-12);
}

TEST(lambda_spectrum, certain_prior) {
    const LambdaSpectrum ls = lambda_spectrum(ProblemConfig::make(2, 2, 1, 1, 0.0));
    EXPECT_EQ(count_near(ls.eigenvalues, 1.0 / 9.0, 1e-12), 9u);
    EXPECT_NEAR(ls.p_error, 0.0, 1e-12);
}

TEST(lambda_spectrum, unpaired_direction) {
    const auto cfg = ProblemConfig::make(2, 2, 1, 1);
    const LambdaSpectrum ls = lambda_spectrum(cfg);
    EXPECT_EQ(count_near(ls.eigenvalues, 1.0 / 18.0, 1e-12), 1u);
    EXPECT_NEAR(ls.p_error, solve_minerror(cfg).p_error, 1e-12);
}

TEST(lambda_spectrum, restricted_matches_full_operator) {
    for (const auto& base : verification_grid({2, 3}, 2, 243)) {
        for (double eta1 : {0.2, 0.5, 0.9}) {
            ProblemConfig cfg = base;
            cfg.eta1 = eta1;
            cfg.eta2 = 1.0 - eta1;
            const LambdaSpectrum full = lambda_spectrum_full(cfg);
            const LambdaSpectrum restricted = lambda_spectrum(cfg);
            EXPECT_NEAR(full.trace_norm, restricted.trace_norm, 1e-11) << describe(cfg, eta1);
            EXPECT_EQ(full.eigenvalues.size(), restricted.eigenvalues.size() + restricted.zero_multiplicity);
            std::vector<double> nonzero;
            for (double v : full.eigenvalues)
                if (std::abs(v) > 1e-10) nonzero.push_back(v);
            for (double v : nonzero) EXPECT_GE(count_near(restricted.eigenvalues, v, 1e-10), 1u);
        }
    }
}

TEST(certify_povm, all_ones) {
    const PovmCertificate c = certify_povm(ProblemConfig::make(2, 1, 1, 1));
    EXPECT_TRUE(c.passed) << c.failure_reason;
    EXPECT_NEAR(c.failure, 5.0 / 6.0, 1e-9);
    EXPECT_EQ(c.perp_rank, 0u);
}

TEST(certify_povm, uneven_copies) {
    const PovmCertificate c = certify_povm(ProblemConfig::make(2, 2, 1, 1));
    EXPECT_TRUE(c.passed) << c.failure_reason;
    EXPECT_NEAR(c.failure, 85.0 / 144.0 + 1.0 / (2.0 * std::sqrt(6.0)), 1e-9);
    EXPECT_EQ(c.perp_rank, 1u);
}

TEST(certify_povm, certain_prior) {
    for (double eta1 : {0.0, 1.0}) {
        const PovmCertificate c = certify_povm(ProblemConfig::make(2, 2, 1, 1, eta1));
        EXPECT_TRUE(c.passed) << c.failure_reason;
        EXPECT_LE(c.error_1_as_2, 1e-12);
        EXPECT_LE(c.error_2_as_1, 1e-12);
    }
}

TEST(certify_povm, swapped_labels) {
    for (double eta1 : {0.1, 0.5, 0.9}) {
        const PovmCertificate c = certify_povm(ProblemConfig::make(2, 1, 2, 3, eta1));
        EXPECT_TRUE(c.passed) << c.failure_reason;
        EXPECT_GT(c.perp_rank, 0u);
    }
}

TEST(certify_povm, printed_high_branch_fails) {
    const PovmCertificate c =
        certify_povm(ProblemConfig::make(2, 1, 1, 1, 0.9), HighBranchRule::printed_overlap);
    EXPECT_FALSE(c.passed);
    EXPECT_GT(c.failure_residual(), 1e-3);
}

TEST(haar_average, single_sample_is_rank_one_projector) {
    const DenseHermitian avg = haar_average(2, 3, 1, 11);
    EXPECT_NEAR(trace(avg).real(), 1.0, 1e-14);
    EXPECT_LE(max_abs(multiply(avg, avg) - avg), 1e-14);
    const auto ev = hermitian_eigenvalues(avg);
    EXPECT_NEAR(ev.back(), 1.0, 1e-13);
    EXPECT_EQ(count_near(ev, 0.0, 1e-13), 8u);
}

TEST(haar_average, deterministic_per_seed) {
    const DenseHermitian a = haar_average(2, 2, 500, 42);
    const DenseHermitian b = haar_average(2, 2, 500, 42);
    const DenseHermitian c = haar_average(2, 2, 500, 43);
    EXPECT_EQ(max_abs(a - b), 0.0);
    EXPECT_GT(max_abs(a - c), 0.0);
}

TEST(haar_average, lemma_one) {
    EXPECT_LE(haar_deviation(1, 2, 100000, 1), 0.02);
    EXPECT_LE(haar_deviation(2, 2, 100000, 1), 0.02);
    EXPECT_THROW(haar_average(1, 2, 0, 1), std::invalid_argument);
    EXPECT_THROW(haar_average(7, 4, 1, 1, 4096), CapExceeded);
}

TEST(verification, small_grid_passes) {
    VerifyOptions opt;
    opt.max_total_dim = 64;
    opt.samples = 20000;
    const VerifyReport r = run_verification(opt);
    EXPECT_FALSE(r.grid.empty());
    for (const auto& f : r.families) EXPECT_TRUE(f.passed()) << f.name << ": " << f.first_failure;
}

TEST(verification, injected_fault_is_caught) {
    VerifyOptions opt;
    opt.max_total_dim = 64;
    opt.samples = 2000;
    opt.inject_fault = true;
    const VerifyReport r = run_verification(opt);
    EXPECT_FALSE(r.passed());
    for (const auto& f : r.families) {
        if (f.name == "povm") {
            EXPECT_GT(f.failures, 0u);
        }
    }
}

TEST(operator_cap, environment_override) {
    ::setenv("QUDISC_MAX_DIM", "64", 1);
    EXPECT_EQ(default_operator_cap(), 64u);
    EXPECT_THROW(symmetrizer(7, 2), CapExceeded);
    ::setenv("QUDISC_MAX_DIM", "lots", 1);
    EXPECT_EQ(default_operator_cap(), kDefaultOperatorCap);
    ::unsetenv("QUDISC_MAX_DIM");
    EXPECT_EQ(default_operator_cap(), kDefaultOperatorCap);
}
