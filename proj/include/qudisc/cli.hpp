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
 * @file cli.hpp
 * Command-line frontend. run_cli() parses argv and writes to the given
 * streams, so the tests can drive it in-process.
 *
 * Exit codes: 0 ok, 1 verification failure, 2 flag error,
 * 3 precondition error, 4 I/O error.
 */
#pragma once

#include "qudisc/combinatorics.hpp"
#include "qudisc/discrimination.hpp"
#include "qudisc/errors.hpp"
#include "qudisc/oracle.hpp"
#include "qudisc/spectrum.hpp"
#include "qudisc/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace qudisc {

enum ExitCode : int {
    kExitOk = 0,
    kExitVerifyFailed = 1,
    kExitUsage = 2,
    kExitPrecondition = 3,
    kExitIo = 4,
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal form of `v` with at most 12 significant digits, locale-independent.
inline std::string format_sig12(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

inline std::string to_string(const BigInt& i) { return i.str(); }

struct IntRange {
    int lo = 0;
    int hi = 0;
};

/// "LO:HI" or a single integer.
inline IntRange parse_range(const std::string& text, const char* what) {
    IntRange r;
    const auto colon = text.find(':');
    auto parse_int = [&](std::string_view s) {
        int v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
            throw ConfigError(std::string(what) + ": expected LO:HI, got '" + text + "'");
        }
        return v;
    };
    const std::string_view view(text);
    if (colon == std::string::npos) {
        r.lo = r.hi = parse_int(view);
    } else {
        r.lo = parse_int(view.substr(0, colon));
        r.hi = parse_int(view.substr(colon + 1));
    }
    if (r.lo > r.hi) throw ConfigError(std::string(what) + ": empty range '" + text + "'");
    return r;
}

struct SweepRow {
    ProblemConfig config;
    double q_opt = 0.0;
    double p_me = 0.0;
    std::optional<double> q0;
    double p0 = 0.0;
};

inline constexpr const char* kSweepHeader = "n,n_A,n_B,n_C,eta1,Q_opt,P_ME,Q0,P0";

inline SweepRow sweep_row(const ProblemConfig& cfg) {
    const AsymptoticBounds b = asymptotic_bounds(cfg);
    return {cfg, solve_unambiguous(cfg).total, solve_minerror(cfg).p_error, b.q0, b.p0};
}

inline std::string csv_line(const SweepRow& r) {
    const ProblemConfig& c = r.config;
    std::string line = std::to_string(c.n) + ',' + std::to_string(c.n_A) + ',' + std::to_string(c.n_B) + ',' +
                       std::to_string(c.n_C) + ',' + format_sig12(c.eta1) + ',' + format_sig12(r.q_opt) + ',' +
                       format_sig12(r.p_me) + ',' + (r.q0 ? format_sig12(*r.q0) : std::string()) + ',' +
                       format_sig12(r.p0);
    return line;
}

inline nlohmann::json config_json(const ProblemConfig& c) {
    return {{"n", c.n}, {"n_A", c.n_A}, {"n_B", c.n_B}, {"n_C", c.n_C}, {"eta1", c.eta1}, {"eta2", c.eta2}};
}

/// Inverse of config_json; eta2 is recomputed from eta1.
inline ProblemConfig config_from_json(const nlohmann::json& j) {
    return ProblemConfig::make(j.at("n").get<int>(), j.at("n_A").get<int>(), j.at("n_B").get<int>(),
                               j.at("n_C").get<int>(), j.at("eta1").get<double>());
}

// Multiplicities and ranks are exact integers of unbounded size; JSON carries them as decimal strings.

inline nlohmann::json spectrum_json(const ProblemConfig& cfg) {
    const JordanSpectrum s = jordan_spectrum(cfg);
    nlohmann::json blocks = nlohmann::json::array();
    for (const JordanBlock& b : s.blocks) {
        blocks.push_back({{"k", b.k}, {"overlap", b.overlap}, {"multiplicity", to_string(b.multiplicity)}});
    }
    return {{"config", config_json(cfg)},
            {"blocks", blocks},
            {"total", {{"d1", to_string(s.d1)}, {"d2", to_string(s.d2)}, {"d2_minus_d1", to_string(s.d2 - s.d1)}}},
            {"swapped", false}};
}

inline nlohmann::json unambiguous_json(const ProblemConfig& cfg, const UnambiguousResult& r) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const UnambiguousBlock& b : r.blocks) {
        blocks.push_back({{"k", b.k},
                          {"overlap", b.overlap},
                          {"multiplicity", to_string(b.multiplicity)},
                          {"branch", std::string(to_string(b.branch))},
                          {"c", b.c},
                          {"d", b.d},
                          {"q1", b.q1},
                          {"q2", b.q2},
                          {"failure", b.failure}});
    }
    return {{"config", config_json(cfg)}, {"blocks", blocks}, {"total", r.total}, {"swapped", r.swapped}};
}

inline nlohmann::json minerror_json(const ProblemConfig& cfg, const MinErrorResult& r) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const MinErrorBlock& b : r.blocks) {
        blocks.push_back({{"k", b.k},
                          {"overlap", b.overlap},
                          {"multiplicity", to_string(b.multiplicity)},
                          {"lambda_plus", b.lambda_plus},
                          {"lambda_minus", b.lambda_minus}});
    }
    return {{"config", config_json(cfg)},
            {"blocks", blocks},
            {"residual", {{"eigenvalue", r.residual_eigenvalue}, {"multiplicity", to_string(r.residual_multiplicity)}}},
            {"total", r.p_error},
            {"swapped", r.swapped}};
}

inline nlohmann::json bounds_json(const ProblemConfig& cfg) {
    const CanonicalConfig cc = canonicalize(cfg);
    const AsymptoticBounds b = asymptotic_bounds(cfg);
    nlohmann::json blocks = nlohmann::json::array();
    for (int k = 0; k <= cc.config.k_max(); ++k) {
        blocks.push_back({{"k", k}, {"overlap", overlap(k, cc.config)}});
    }
    nlohmann::json total = {{"Q0", nullptr}, {"P0", b.p0}};
    if (b.q0) total["Q0"] = *b.q0;
    return {{"config", config_json(cfg)}, {"blocks", blocks}, {"total", total}, {"swapped", cc.swapped}};
}

namespace detail {

inline void print_table(std::ostream& out, const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << std::setw(static_cast<int>(width[c])) << row[c] << (c + 1 < row.size() ? "  " : "\n");
        }
    };
    emit(header);
    for (const auto& row : rows) emit(row);
}

inline void print_config(std::ostream& out, const ProblemConfig& c, bool with_priors, bool swapped) {
    out << "n=" << c.n << " n_A=" << c.n_A << " n_B=" << c.n_B << " n_C=" << c.n_C;
    if (with_priors) out << " eta1=" << format_sig12(c.eta1) << " eta2=" << format_sig12(c.eta2);
    out << (swapped ? " (computed with A and C exchanged)" : "") << "\n";
}

} // namespace detail

struct CommonFlags {
    int n = 2;
    int n_A = 1;
    int n_B = 1;
    int n_C = 1;
    double eta1 = 0.5;
    bool json = false;
    std::string out_path;

    [[nodiscard]] ProblemConfig config() const {
        ProblemConfig c = ProblemConfig::make(n, n_A, n_B, n_C, eta1);
        validate(c);
        return c;
    }
};

/// Writes `text` to `path`, or to `out` when the path is empty.
inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    f.flush();
    if (!f) throw IoError("write to '" + path + "' failed");
}

inline int cmd_spectrum(const CommonFlags& flags, std::ostream& out) {
    const ProblemConfig cfg = flags.config();
    std::ostringstream text;
    if (flags.json) {
        text << spectrum_json(cfg).dump(2) << "\n";
    } else {
        const JordanSpectrum s = jordan_spectrum(cfg);
        detail::print_config(text, cfg, false, false);
        std::vector<std::vector<std::string>> rows;
        for (const JordanBlock& b : s.blocks) {
            rows.push_back({std::to_string(b.k), format_sig12(b.overlap), to_string(b.multiplicity)});
        }
        detail::print_table(text, {"k", "O_k", "d^k"}, rows);
        text << "d1 = " << s.d1 << "\nd2 = " << s.d2 << "\nd2 - d1 = " << BigInt(s.d2 - s.d1) << "\n";
    }
    emit(text.str(), flags.out_path, out);
    return kExitOk;
}

inline int cmd_unambiguous(const CommonFlags& flags, std::ostream& out) {
    const ProblemConfig cfg = flags.config();
    const UnambiguousResult r = solve_unambiguous(cfg);
    std::ostringstream text;
    if (flags.json) {
        text << unambiguous_json(cfg, r).dump(2) << "\n";
    } else {
        detail::print_config(text, cfg, true, r.swapped);
        std::vector<std::vector<std::string>> rows;
        for (const UnambiguousBlock& b : r.blocks) {
            rows.push_back({std::to_string(b.k), format_sig12(b.overlap), to_string(b.multiplicity),
                            std::string(to_string(b.branch)), format_sig12(b.c), format_sig12(b.d),
                            format_sig12(b.q1), format_sig12(b.q2), format_sig12(b.failure)});
        }
        detail::print_table(text, {"k", "O_k", "d^k", "branch", "c_k", "d_k", "q1", "q2", "Q_k"}, rows);
        text << "Q_opt = " << format_sig12(r.total) << "\n";
    }
    emit(text.str(), flags.out_path, out);
    return kExitOk;
}

inline int cmd_minerror(const CommonFlags& flags, std::ostream& out) {
    const ProblemConfig cfg = flags.config();
    const MinErrorResult r = solve_minerror(cfg);
    std::ostringstream text;
    if (flags.json) {
        text << minerror_json(cfg, r).dump(2) << "\n";
    } else {
        detail::print_config(text, cfg, true, r.swapped);
        std::vector<std::vector<std::string>> rows;
        for (const MinErrorBlock& b : r.blocks) {
            rows.push_back({std::to_string(b.k), format_sig12(b.overlap), to_string(b.multiplicity),
                            format_sig12(b.lambda_plus), format_sig12(b.lambda_minus)});
        }
        detail::print_table(text, {"k", "O_k", "d^k", "lambda+", "lambda-"}, rows);
        text << "unpaired eigenvalue = " << format_sig12(r.residual_eigenvalue) << " (x"
             << BigInt(abs(r.residual_multiplicity)) << ")\n";
        text << "P_ME = " << format_sig12(r.p_error) << "\n";
    }
    emit(text.str(), flags.out_path, out);
    return kExitOk;
}

/// Prints Q0 and P0; Q0 needs n_A == n_C, otherwise P0 alone is printed and the exit code is 3.
inline int cmd_bounds(const CommonFlags& flags, std::ostream& out, std::ostream& err) {
    const ProblemConfig cfg = flags.config();
    const AsymptoticBounds b = asymptotic_bounds(cfg);
    std::ostringstream text;
    if (flags.json) {
        text << bounds_json(cfg).dump(2) << "\n";
    } else {
        text << "n_A=" << cfg.n_A << " n_B=" << cfg.n_B << " n_C=" << cfg.n_C << "\n";
        text << "Q0 = " << (b.q0 ? format_sig12(*b.q0) : std::string("undefined")) << "\n";
        text << "P0 = " << format_sig12(b.p0) << "\n";
    }
    emit(text.str(), flags.out_path, out);
    if (!b.q0) {
        err << "error: Q0 requires n_A == n_C\n";
        return kExitPrecondition;
    }
    return kExitOk;
}

inline std::string render_verify(const VerifyReport& report, std::size_t max_total_dim) {
    std::ostringstream text;
    text << "grid: " << report.grid.size() << " configs, n^N <= " << max_total_dim << "\n";
    for (const CheckFamily& f : report.families) {
        char residual[32];
        std::snprintf(residual, sizeof residual, "%.3e", f.max_residual);
        text << (f.passed() ? "PASS " : "FAIL ") << f.name << " checks=" << f.checks << " failures=" << f.failures
             << " max_residual=" << residual << "\n";
        if (!f.passed() && !f.first_failure.empty()) text << "  first failure: " << f.first_failure << "\n";
    }
    text << (report.passed() ? "all checks passed" : "verification FAILED") << "\n";
    return text.str();
}

inline int cmd_verify(const VerifyOptions& opt, const std::string& out_path, std::ostream& out) {
    const VerifyReport report = run_verification(opt);
    emit(render_verify(report, opt.max_total_dim), out_path, out);
    return report.passed() ? kExitOk : kExitVerifyFailed;
}

struct SweepRequest {
    IntRange dims;
    std::optional<IntRange> copies; ///< n_A = n_B = n_C over this range, replaces the individual counts
    int n_A = 1;
    int n_B = 1;
    int n_C = 1;
    double eta1 = 0.5;
    std::string format = "csv";
    std::string out_path;
};

inline std::vector<SweepRow> sweep_rows(const SweepRequest& req) {
    if (req.dims.lo < 2) throw ConfigError("sweep: dimensions must be >= 2");
    std::vector<ProblemConfig> configs;
    for (int n = req.dims.lo; n <= req.dims.hi; ++n) {
        if (req.copies) {
            if (req.copies->lo < 1) throw ConfigError("sweep: copy counts must be >= 1");
            for (int c = req.copies->lo; c <= req.copies->hi; ++c) {
                configs.push_back(ProblemConfig::make(n, c, c, c, req.eta1));
            }
        } else {
            configs.push_back(ProblemConfig::make(n, req.n_A, req.n_B, req.n_C, req.eta1));
        }
    }
    for (const ProblemConfig& c : configs) validate(c);
    std::vector<SweepRow> rows;
    rows.reserve(configs.size());
    for (const ProblemConfig& c : configs) rows.push_back(sweep_row(c));
    return rows;
}

inline std::string render_sweep(const std::vector<SweepRow>& rows, const std::string& format) {
    std::string text;
    if (format == "csv") {
        text = std::string(kSweepHeader) + "\n";
        for (const SweepRow& r : rows) text += csv_line(r) + "\n";
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const SweepRow& r : rows) {
            nlohmann::json row = config_json(r.config);
            row["Q_opt"] = r.q_opt;
            row["P_ME"] = r.p_me;
            row["Q0"] = r.q0 ? nlohmann::json(*r.q0) : nlohmann::json(nullptr);
            row["P0"] = r.p0;
            arr.push_back(row);
        }
        text = arr.dump(2) + "\n";
    }
    return text;
}

inline int cmd_sweep(const SweepRequest& req, std::ostream& out) {
    emit(render_sweep(sweep_rows(req), req.format), req.out_path, out);
    return kExitOk;
}

/// Parse argv and run one subcommand.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Programmable discrimination of qudit states: spectra, optimal probabilities, and checks",
                 "qudisc"};
    app.require_subcommand(1);

    CommonFlags flags;
    auto add_common = [&](CLI::App* sub, bool with_eta, bool with_dim) {
        if (with_dim) sub->add_option("-n,--dim", flags.n, "single-copy dimension n (>= 2)")->capture_default_str();
        sub->add_option("--na", flags.n_A, "copies in program register A")->capture_default_str();
        sub->add_option("--nb", flags.n_B, "copies in data register B")->capture_default_str();
        sub->add_option("--nc", flags.n_C, "copies in program register C")->capture_default_str();
        if (with_eta) {
            sub->add_option("--eta1", flags.eta1, "prior of state 1 (eta2 = 1 - eta1)")->capture_default_str();
        }
        sub->add_flag("--json", flags.json, "emit JSON");
        sub->add_option("--out", flags.out_path, "write to PATH instead of stdout");
    };

    CLI::App* spectrum = app.add_subcommand("spectrum", "Jordan blocks: O_k, d^k, ranks");
    add_common(spectrum, false, true);
    CLI::App* unambiguous = app.add_subcommand("unambiguous", "optimal unambiguous failure probability");
    add_common(unambiguous, true, true);
    CLI::App* minerror = app.add_subcommand("minerror", "minimum-error probability");
    add_common(minerror, true, true);
    CLI::App* bounds = app.add_subcommand("bounds", "large-n limits Q0 and P0");
    add_common(bounds, false, false);

    VerifyOptions vopt;
    vopt.max_total_dim = std::min(default_operator_cap(), kDefaultCertificationCap);
    std::string verify_out;
    CLI::App* verify = app.add_subcommand("verify", "check closed forms against the dense oracle");
    verify->add_option("--max-total-dim", vopt.max_total_dim, "largest n^N in the grid")->capture_default_str();
    verify->add_option("--seed", vopt.seed, "Monte Carlo seed")->capture_default_str();
    verify->add_option("--samples", vopt.samples, "Monte Carlo samples")->capture_default_str();
    verify->add_option("--out", verify_out, "write the report to PATH");
    verify->add_flag("--inject-fault", vopt.inject_fault, "use the printed HIGH-branch q1 (negative control)")
        ->group("");

    SweepRequest req;
    std::string dims_text;
    std::string copies_text;
    CLI::App* sweep = app.add_subcommand("sweep", "CSV/JSON table over a range of n or copy counts");
    sweep->add_option("-n,--dim", dims_text, "single dimension n");
    sweep->add_option("--dims", dims_text, "dimension range LO:HI");
    sweep->add_option("--copies", copies_text, "equal copy counts n_A = n_B = n_C over LO:HI");
    sweep->add_option("--na", req.n_A, "copies in A")->capture_default_str();
    sweep->add_option("--nb", req.n_B, "copies in B")->capture_default_str();
    sweep->add_option("--nc", req.n_C, "copies in C")->capture_default_str();
    sweep->add_option("--eta1", req.eta1, "prior of state 1")->capture_default_str();
    sweep->add_option("--format", req.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sweep->add_option("--out", req.out_path, "write to PATH instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << e.what() << "\n";
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*spectrum) return cmd_spectrum(flags, out);
        if (*unambiguous) return cmd_unambiguous(flags, out);
        if (*minerror) return cmd_minerror(flags, out);
        if (*bounds) return cmd_bounds(flags, out, err);
        if (*verify) {
            if (vopt.samples < 1) throw ConfigError("--samples must be >= 1");
            return cmd_verify(vopt, verify_out, out);
        }
        if (*sweep) {
            req.dims = parse_range(dims_text.empty() ? std::string("2") : dims_text, "--dims");
            if (!copies_text.empty()) req.copies = parse_range(copies_text, "--copies");
            return cmd_sweep(req, out);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}

} // namespace qudisc
