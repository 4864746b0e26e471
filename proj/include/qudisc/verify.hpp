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
 * @file verify.hpp
 * Closed forms against the dense oracle over a grid of small configurations.
 */
#pragma once

#include "qudisc/discrimination.hpp"
#include "qudisc/oracle.hpp"
#include "qudisc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace qudisc {

inline constexpr double kAngleTolerance = 1e-9;
inline constexpr double kProbabilityTolerance = 1e-9;
inline constexpr double kLemmaTolerance = 0.02;

struct VerifyOptions {
    std::vector<int> dims{2, 3, 4};
    int max_copies = 3;
    std::size_t max_total_dim = kDefaultCertificationCap;
    std::vector<double> priors{0.1, 0.3, 0.5, 0.7, 0.9};
    std::uint64_t seed = 20260101;
    std::size_t samples = 100000;
    /// Negative control: assemble the POVM with the printed HIGH-branch q1 = O_k.
    bool inject_fault = false;
};

struct CheckFamily {
    std::string name;
    std::size_t checks = 0;
    std::size_t failures = 0;
    double max_residual = 0.0;
    std::string first_failure;

    explicit CheckFamily(std::string family_name) : name(std::move(family_name)) {}

    [[nodiscard]] bool passed() const noexcept { return checks > 0 && failures == 0; }

    void record(double residual, bool ok, const std::string& where) {
        ++checks;
        if (std::isnan(residual)) {
            max_residual = residual;
        } else if (!std::isnan(max_residual)) {
            max_residual = std::max(max_residual, residual);
        }
        if (!ok) {
            if (failures == 0) first_failure = where;
            ++failures;
        }
    }
};

struct VerifyReport {
    std::vector<ProblemConfig> grid;
    std::vector<CheckFamily> families;

    [[nodiscard]] bool passed() const {
        return std::all_of(families.begin(), families.end(), [](const CheckFamily& f) { return f.passed(); });
    }
};

/// Configs with n in `dims`, copies in 1..max_copies, and n^N <= max_total_dim.
inline std::vector<ProblemConfig> verification_grid(const std::vector<int>& dims, int max_copies,
                                                    std::size_t max_total_dim) {
    std::vector<ProblemConfig> grid;
    for (int n : dims)
        for (int a = 1; a <= max_copies; ++a)
            for (int b = 1; b <= max_copies; ++b)
                for (int c = 1; c <= max_copies; ++c) {
                    if (tensor_dimension(n, a + b + c) <= max_total_dim) {
                        grid.push_back(ProblemConfig::make(n, a, b, c));
                    }
                }
    return grid;
}

inline std::string describe(const ProblemConfig& cfg) {
    return "n=" + std::to_string(cfg.n) + " copies=(" + std::to_string(cfg.n_A) + "," + std::to_string(cfg.n_B) +
           "," + std::to_string(cfg.n_C) + ")";
}

inline std::string describe(const ProblemConfig& cfg, double eta1) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " eta1=%.2f", eta1);
    return describe(cfg) + buf;
}

/// Compare dense principal angles with the closed-form blocks; returns the worst cosine gap,
/// or NaN on a structural mismatch (group count, multiplicity, or unpaired dimension).
inline double angle_mismatch(const PrincipalAngles& angles, const JordanSpectrum& s) {
    if (angles.groups.size() != s.blocks.size()) return std::nan("");
    double worst = 0.0;
    for (std::size_t i = 0; i < s.blocks.size(); ++i) {
        if (BigInt(angles.groups[i].multiplicity) != s.blocks[i].multiplicity) return std::nan("");
        // every member of the group, not just its anchor
        worst = std::max(worst, std::abs(angles.groups[i].cosine - s.blocks[i].overlap));
    }
    std::size_t offset = 0;
    for (std::size_t i = 0; i < s.blocks.size(); ++i) {
        for (std::size_t j = 0; j < angles.groups[i].multiplicity; ++j) {
            worst = std::max(worst, std::abs(angles.cosines[offset + j] - s.blocks[i].overlap));
        }
        offset += angles.groups[i].multiplicity;
    }
    const BigInt unpaired1 = s.d1 > s.d2 ? BigInt(s.d1 - s.d2) : BigInt(0);
    const BigInt unpaired2 = s.d2 > s.d1 ? BigInt(s.d2 - s.d1) : BigInt(0);
    if (BigInt(angles.unpaired1) != unpaired1 || BigInt(angles.unpaired2) != unpaired2) return std::nan("");
    return worst;
}

/// Lemma-1 Monte Carlo targets: (m, n).
inline const std::vector<std::pair<int, int>>& lemma_targets() {
    static const std::vector<std::pair<int, int>> targets{{1, 2}, {2, 2}, {2, 3}, {3, 2}};
    return targets;
}

inline VerifyReport run_verification(const VerifyOptions& opt) {
    VerifyReport report;
    report.grid = verification_grid(opt.dims, opt.max_copies, opt.max_total_dim);

    CheckFamily comb{"combinatorics"};
    CheckFamily sixj{"6j"};
    CheckFamily angles{"principal-angles"};
    CheckFamily minerr{"min-error"};
    CheckFamily povm{"povm"};
    CheckFamily lemma{"lemma1-mc"};
    const HighBranchRule rule = opt.inject_fault ? HighBranchRule::printed_overlap : HighBranchRule::squared_overlap;

    for (const ProblemConfig& base : report.grid) {
        const CanonicalConfig cc = canonicalize(base);
        const JordanSpectrum s = jordan_spectrum(cc.config);
        const int N = base.total_copies();

        BigInt sum = 0;
        bool exact = true;
        for (const JordanBlock& b : s.blocks) {
            exact = exact && b.multiplicity == unitary_dim(Partition::two_row(N - b.k, b.k), base.n);
            sum += b.multiplicity;
        }
        exact = exact && sum == std::min(s.d1, s.d2);
        comb.record(exact ? 0.0 : 1.0, exact, describe(base));

        for (const JordanBlock& b : s.blocks) {
            const double r = std::abs(overlap_via_6j(b.k, cc.config) - b.overlap);
            sixj.record(r, r <= 1e-12, describe(base) + " k=" + std::to_string(b.k));
        }

        // dense model in the caller's labeling
        const JordanSpectrum user_s = jordan_spectrum(base);
        const DenseModel model(base, opt.max_total_dim);
        const double gap = angle_mismatch(model.principal_angles(), user_s);
        angles.record(gap, gap <= kAngleTolerance, describe(base));

        for (double eta1 : opt.priors) {
            ProblemConfig cfg = base;
            cfg.eta1 = eta1;
            cfg.eta2 = 1.0 - eta1;
            const double r = std::abs(model.lambda_spectrum(eta1).p_error - solve_minerror(cfg).p_error);
            minerr.record(r, r <= kProbabilityTolerance, describe(base, eta1));

            const PovmCertificate cert = model.certify_povm(eta1, rule);
            povm.record(cert.failure_residual(), cert.passed, describe(base, eta1) + ": " + cert.failure_reason);
        }
    }

    for (const auto& [m, n] : lemma_targets()) {
        if (tensor_dimension(n, m) > opt.max_total_dim) continue;
        const double dev = haar_deviation(m, n, opt.samples, opt.seed, opt.max_total_dim);
        lemma.record(dev, dev <= kLemmaTolerance, "m=" + std::to_string(m) + " n=" + std::to_string(n));
    }

    report.families = {comb, sixj, angles, minerr, povm, lemma};
    return report;
}

} // namespace qudisc
