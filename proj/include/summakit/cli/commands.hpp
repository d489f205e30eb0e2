#pragma once

// The check, transform and verify commands. Each returns a process exit
// code: 0 success, 1 verification failure or internal error, 2 invalid
// configuration or input, 3 a tail sum that cannot reach its cutoff.

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "summakit/summakit.hpp"
#include "summakit/cli/config.hpp"
#include "summakit/cli/log.hpp"
#include "summakit/cli/report.hpp"

namespace summakit::cli {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_config = 2, exit_tail = 3 };

/// Command-line overrides applied on top of the config file.
struct RunOptions {
    std::optional<std::string> out;
    std::optional<OutputFormat> format;
    bool strict = false;
    std::optional<std::size_t> tail_cutoff;
    std::optional<std::uint64_t> seed;
};

/// Tolerances used by verify, echoed into report metadata.
struct VerifyTolerances {
    double inverse = 1e-10;
    double delta_routes = 1e-12;
    double probe = 1e-12;
    double decomposition = 1e-10;
    double key_identity = 1e-11;
    double bar_step = 1e-12;
    double t2_slack = 1e-9;
    std::size_t samples = 8;
};

inline ExperimentConfig apply_options(ExperimentConfig cfg, const RunOptions& opts) {
    if (opts.out) cfg.output_path = *opts.out;
    if (opts.format) cfg.format = *opts.format;
    if (opts.tail_cutoff) cfg.tail.cutoff = *opts.tail_cutoff;
    if (opts.seed) cfg.seed = *opts.seed;
    validate_tail_override(cfg);
    return cfg;
}

/// Run `body`, mapping exceptions onto exit codes.
inline int guarded(const Logger& log, const std::function<int()>& body) {
    try {
        return body();
    } catch (const config_error& e) {
        log.error(std::string("config error: ") + e.what());
        return exit_config;
    } catch (const tail_unavailable& e) {
        log.error(std::string("tail unavailable: ") + e.what());
        return exit_tail;
    } catch (const zero_diagonal& e) {
        log.error(std::string("ZeroDiagonal: ") + e.what());
        return exit_config;
    } catch (const error& e) {
        log.error(std::string("invalid input: ") + e.what());
        return exit_config;
    } catch (const nlohmann::json::exception& e) {
        log.error(std::string("config error: ") + e.what());
        return exit_config;
    } catch (const std::exception& e) {
        log.error(std::string("internal error: ") + e.what());
        return exit_failure;
    }
}

namespace detail {

inline nlohmann::json base_metadata(const char* command, const ExperimentConfig& cfg, Reading reading) {
    const VerifyTolerances tol;
    nlohmann::json meta;
    meta["command"] = command;
    meta["versions"] = {{"summakit", version},
                        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    meta["config"] = cfg.source;
    meta["effective"] = {{"k", cfg.k},
                         {"N", cfg.N},
                         {"tail_cutoff", cfg.tail.cutoff},
                         {"warn_threshold", cfg.tail.warn_threshold},
                         {"allow_cap", cfg.tail.allow_cap},
                         {"reading", reading == Reading::literal ? "literal" : "consistent"},
                         {"seed", cfg.seed}};
    meta["tolerances"] = {{"trend_slope", summakit::detail::slope_tolerance},
                          {"trend_noise_floor", summakit::detail::noise_floor},
                          {"structural", summakit::detail::structural_tolerance},
                          {"inverse", tol.inverse},
                          {"delta_routes", tol.delta_routes},
                          {"probe", tol.probe},
                          {"decomposition", tol.decomposition},
                          {"key_identity", tol.key_identity},
                          {"bar_step", tol.bar_step},
                          {"t2_slack", tol.t2_slack}};
    return meta;
}

inline void emit(const Table& t, const nlohmann::json& meta, OutputFormat format, std::ostream& out) {
    if (format == OutputFormat::csv) write_csv(out, t);
    else write_json(out, t, meta);
}

inline void emit_to_file(const Table& t, const nlohmann::json& meta, OutputFormat format,
                         const std::filesystem::path& file) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + file.string() + "'");
    emit(t, meta, format, out);
}

inline const char* extension(OutputFormat f) { return f == OutputFormat::csv ? ".csv" : ".json"; }

inline double max_abs(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::fabs(x));
    return m;
}

} // namespace detail

// ---------------------------------------------------------------------------
// check

inline const std::vector<std::string>& check_columns() {
    static const std::vector<std::string> cols{"condition_id", "v_or_n",       "ratio",       "running_sup",
                                               "trend",        "tail_cutoff", "tail_warning"};
    return cols;
}

inline Table report_table(const ConditionReport& r) {
    Table t{check_columns(), {}};
    const std::string id(to_string(r.id));
    const std::string trend(to_string(r.trend));
    for (std::size_t i = 0; i < r.size(); ++i) {
        const bool warn = i < r.tail_warnings.size() && r.tail_warnings[i];
        t.add({id, static_cast<long long>(r.index(i)), r.ratios[i], r.running_sup[i], trend,
               static_cast<long long>(r.tail_cutoff), warn});
    }
    return t;
}

/// Evaluate the requested (or default) conditions for a validated config.
inline std::vector<ConditionReport> evaluate_conditions(const ExperimentConfig& cfg, Reading reading,
                                                        const Logger& log = Logger(LogLevel::quiet)) {
    const Instance inst = materialize(cfg);
    const auto ids = cfg.conditions.empty() ? default_conditions(inst) : cfg.conditions;
    const std::size_t N = cfg.N;

    auto needs = [&](std::initializer_list<ConditionId> set) {
        return std::any_of(ids.begin(), ids.end(),
                           [&](ConditionId id) { return std::find(set.begin(), set.end(), id) != set.end(); });
    };

    std::optional<NormalMatrix<double>> b_tail;
    if (needs({ConditionId::C10, ConditionId::C11})) {
        b_tail = inst.family_b.materialize(cfg.tail.cutoff, cfg.tail.allow_cap);
        if (b_tail->order() < cfg.tail.cutoff)
            log.warn("B capped at order " + std::to_string(b_tail->order()) + " below tail cutoff " +
                     std::to_string(cfg.tail.cutoff));
    }
    std::optional<std::array<ConditionReport, 3>> riesz;
    if (needs({ConditionId::TA_a, ConditionId::TA_b, ConditionId::TA_c})) {
        if (!inst.family_a.is_riesz() || !inst.family_b.is_riesz())
            throw config_error("conditions", "TA_a/TA_b/TA_c need Riesz (or cesaro) matrices A and B");
        const auto p = inst.family_a.weights()->sequence(N);
        const auto q = inst.family_b.weights()->sequence(cfg.tail.cutoff, cfg.tail.allow_cap);
        riesz = check_theorem_a(p, q, inst.lambda, cfg.k, N, cfg.tail, reading);
    }

    std::vector<ConditionReport> out;
    for (ConditionId id : ids) {
        switch (id) {
        case ConditionId::C9: out.push_back(check_c9(inst.a, inst.b, inst.lambda, cfg.k)); break;
        case ConditionId::C10: out.push_back(check_c10(inst.a, *b_tail, inst.lambda, cfg.k, cfg.tail)); break;
        case ConditionId::C11: out.push_back(check_c11(*b_tail, inst.lambda, cfg.k, cfg.tail, N)); break;
        case ConditionId::C12: out.push_back(check_c12(inst.a)); break;
        case ConditionId::C13: out.push_back(check_c13(inst.a)); break;
        case ConditionId::C14: out.push_back(check_c14(inst.b)); break;
        case ConditionId::C15: out.push_back(check_c15(inst.a)); break;
        case ConditionId::C16: out.push_back(check_c16(inst.a, inst.b, inst.lambda)); break;
        case ConditionId::TA_a: out.push_back((*riesz)[0]); break;
        case ConditionId::TA_b: out.push_back((*riesz)[1]); break;
        case ConditionId::TA_c: out.push_back((*riesz)[2]); break;
        case ConditionId::L1LK: {
            const ProofContext<double> ctx(inst.a, inst.b, inst.lambda);
            if (reading == Reading::consistent) {
                out.push_back(l1_lk_report(l1_lk_bound(build_cnv(ctx, cfg.k), cfg.k)));
            } else {
                L1LkBound<double> bound;
                bound.column_sums = cnv_column_sums(ctx, cfg.k, reading);
                out.push_back(l1_lk_report(bound));
            }
            break;
        }
        }
    }
    return out;
}

inline int cmd_check(const ExperimentConfig& file_cfg, const RunOptions& opts, const Logger& log,
                     std::ostream& stdout_sink = std::cout) {
    return guarded(log, [&] {
        const auto cfg = apply_options(file_cfg, opts);
        const Reading reading = opts.strict ? Reading::literal : Reading::consistent;
        const auto reports = evaluate_conditions(cfg, reading, log);
        const auto base = detail::base_metadata("check", cfg, reading);

        Table all{check_columns(), {}};
        for (const auto& r : reports) {
            log.info(std::string(to_string(r.id)) + ": " + std::string(to_string(r.trend)) +
                     ", sup ratio " + format_number(r.sup_ratio) +
                     (r.any_tail_warning() ? ", tail warning" : ""));
            const Table t = report_table(r);
            if (!cfg.output_path.empty()) {
                auto meta = base;
                meta["condition_id"] = std::string(to_string(r.id));
                meta["trend"] = std::string(to_string(r.trend));
                meta["sup_ratio"] = r.sup_ratio;
                meta["tail_capped"] = r.tail_capped;
                meta["singular"] = r.singular;
                const auto file = std::filesystem::path(cfg.output_path) /
                                  (std::string(to_string(r.id)) + detail::extension(cfg.format));
                detail::emit_to_file(t, meta, cfg.format, file);
            } else {
                all.rows.insert(all.rows.end(), t.rows.begin(), t.rows.end());
            }
        }
        if (cfg.output_path.empty()) detail::emit(all, base, cfg.format, stdout_sink);
        return int(exit_ok);
    });
}

// ---------------------------------------------------------------------------
// transform

inline Table transform_table(const ExperimentConfig& cfg) {
    if (!cfg.series) throw config_error("series", "missing (transform needs a series)");
    const auto a = matrix_family(cfg.matrix_a);
    if (const auto top = a.max_order(); top && *top < cfg.N)
        throw config_error("matrix_a", "matrix has order " + std::to_string(*top) + ", N = " + std::to_string(cfg.N));
    const auto A = a.materialize(cfg.N);
    const auto s = make_series(*cfg.series, cfg.N);
    const auto transformed = transform_partial_sums(A, s);
    const auto prof = abs_k_profile(A, s, cfg.k);

    Table t{{"n", "a_n", "s_n", "A_n", "delta", "t_n", "running_total"}, {}};
    for (std::size_t n = 0; n <= cfg.N; ++n) {
        // row 0 carries the unweighted head term; running totals start at n = 1
        const double term = n == 0 ? prof.head : prof.term(n);
        const double running = n == 0 ? 0.0 : prof.running_total[n - 1];
        t.add({static_cast<long long>(n), s.a(n), s.s(n), transformed[n], prof.delta[n], term, running});
    }
    return t;
}

inline int cmd_transform(const ExperimentConfig& file_cfg, const RunOptions& opts, const Logger& log,
                         std::ostream& stdout_sink = std::cout) {
    return guarded(log, [&] {
        const auto cfg = apply_options(file_cfg, opts);
        const Table t = transform_table(cfg);
        auto meta = detail::base_metadata("transform", cfg, Reading::consistent);
        if (cfg.output_path.empty()) detail::emit(t, meta, cfg.format, stdout_sink);
        else detail::emit_to_file(t, meta, cfg.format, cfg.output_path);
        log.info("transform: running total " + format_number(std::get<double>(t.rows.back().back())));
        return int(exit_ok);
    });
}

// ---------------------------------------------------------------------------
// verify

struct VerifyResult {
    Table table{{"check", "index", "value", "tolerance", "pass"}, {}};
    bool all_pass = true;

    void add(const std::string& check, long long index, double value, double tol, bool informational = false) {
        const bool pass = informational || (std::isfinite(value) && value <= tol);
        table.add({check, index, value, tol, pass});
        all_pass = all_pass && pass;
    }
};

namespace detail {

inline double inverse_residual(const NormalMatrix<double>& h) {
    const auto inv = invert_hat(h);
    double worst = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double left = 0.0, right = 0.0;
            for (std::size_t l = j; l <= i; ++l) {
                left += inv(i, l) * h(l, j);
                right += h(i, l) * inv(l, j);
            }
            const double target = i == j ? 1.0 : 0.0;
            worst = std::max({worst, std::fabs(left - target), std::fabs(right - target)});
        }
    return worst;
}

} // namespace detail

/// Run every proof-harness identity on the configured instance plus seeded
/// random series.
inline VerifyResult run_verify(const ExperimentConfig& cfg, Reading reading, const Logger& log,
                               const VerifyTolerances& tol = {}) {
    const Instance inst = materialize(cfg);
    const std::size_t N = cfg.N;
    const double k = cfg.k;
    const ProofContext<double> ctx(inst.a, inst.b, inst.lambda);
    const double lam_scale = std::max(1.0, detail::max_abs(inst.lambda.values()));
    VerifyResult res;

    res.add("inverse_identity_a", 0, detail::inverse_residual(ctx.hat_a()), tol.inverse);
    res.add("inverse_identity_b", 0, detail::inverse_residual(ctx.hat_b()), tol.inverse);

    std::vector<SeriesSample<double>> samples;
    if (cfg.series) samples.push_back(make_series(*cfg.series, N));
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (std::size_t i = 0; i < tol.samples; ++i) {
        std::vector<double> c(N + 1);
        for (auto& x : c) x = coeff(rng);
        samples.emplace_back(std::move(c));
    }

    const auto c16 = check_c16(inst.a, inst.b, inst.lambda);
    const auto dnr_bound = l1_lk_bound(build_dnr(ctx, k), k);
    const auto cnv_bound = l1_lk_bound(build_cnv(ctx, k), k);
    if (ctx.first_bar_columns_unit()) log.info("decomposition: first bar columns are identically one");
    else log.info("decomposition: bar a_n0 or bar b_n0 differs from 1, boundary term retained");

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        const auto id = static_cast<long long>(i);
        const double scale = std::max(1.0, partial_sum_scale(s));
        const auto x = delta_transform_with_hat(ctx.hat_a(), s);
        const auto y = delta_transform_via_differences(inst.a, s);
        double gap = 0.0;
        for (std::size_t n = 0; n <= N; ++n) gap = std::max(gap, std::fabs(x[n] - y[n]));
        res.add("delta_routes", id, gap / scale, tol.delta_routes);

        const auto d = decompose(ctx, s);
        res.add("decomposition", id, d.residual / std::max(1.0, d.scale), tol.decomposition);

        if (c16.singular.empty()) {
            const double lhs = t2_k_sum(d, k);
            const double rhs = std::pow(c16.sup_ratio, k) * dnr_bound.sup * std::pow(l1_norm(d.delta_x), k);
            const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? INFINITY : 0.0);
            res.add("t2_inequality", id, ratio, 1.0 + tol.t2_slack);
        }
    }
    if (!c16.singular.empty()) log.warn("t2_inequality skipped: C16 has a vanishing denominator");

    double probe_gap = 0.0;
    for (std::size_t v = 0; v < N; ++v)
        for (ProbeKind kind : {ProbeKind::difference, ProbeKind::shift}) {
            const auto p = run_probe(ctx, v, kind, k, reading);
            res.add(std::string("probe_") + std::string(to_string(kind)), static_cast<long long>(v),
                    p.discrepancy / lam_scale, tol.probe);
            probe_gap = std::max(probe_gap, p.discrepancy);
        }

    res.add("key_identity", 0, key_identity_sweep(ctx) / lam_scale, tol.key_identity);
    double bar_gap = 0.0;
    for (std::size_t v = 0; v < N; ++v) bar_gap = std::max(bar_gap, bar_step_discrepancy(ctx, v));
    res.add("bar_step", 0, bar_gap, tol.bar_step);

    res.table.add({std::string("cnv_bound"), static_cast<long long>(cnv_bound.argmax), cnv_bound.sup, DBL_MAX,
                   std::isfinite(cnv_bound.sup)});
    res.table.add({std::string("dnr_bound"), static_cast<long long>(dnr_bound.argmax), dnr_bound.sup, DBL_MAX,
                   std::isfinite(dnr_bound.sup)});
    res.all_pass = res.all_pass && std::isfinite(cnv_bound.sup) && std::isfinite(dnr_bound.sup);

    // Every probe ratio against the recorded maximum M.
    const auto sweep = probe_sweep(ctx, k, reading);
    double worst = 0.0;
    for (const auto& r : sweep.records) worst = std::max(worst, sweep.max_ratio > 0.0 ? r.ratio / sweep.max_ratio : 0.0);
    res.add("norm_inequality", 0, worst, 1.0);
    res.add("norm_constant_M", 0, sweep.max_ratio, DBL_MAX, true);

    if (reading == Reading::literal) {
        const auto cons = probe_sweep(ctx, k, Reading::consistent);
        res.add("literal_M_minus_consistent_M", 0, sweep.max_ratio - cons.max_ratio, DBL_MAX, true);
        const auto lit_cols = cnv_column_sums(ctx, k, Reading::literal);
        const auto cons_cols = cnv_column_sums(ctx, k, Reading::consistent);
        double col_gap = 0.0;
        for (std::size_t v = 0; v < lit_cols.size(); ++v) col_gap = std::max(col_gap, std::fabs(lit_cols[v] - cons_cols[v]));
        res.add("literal_cnv_column_gap", 0, col_gap, DBL_MAX, true);
        log.info("strict mode: M literal " + format_number(sweep.max_ratio) + " vs consistent " +
                 format_number(cons.max_ratio) + "; c_nv column sums differ by up to " + format_number(col_gap));
    }

    for (const auto& row : res.table.rows) {
        const auto& name = std::get<std::string>(row[0]);
        const bool pass = std::get<bool>(row[4]);
        const std::string line = name + "[" + std::to_string(std::get<long long>(row[1])) + "] = " +
                                 format_number(std::get<double>(row[2])) + (pass ? "" : "  FAILED");
        if (pass) log.debug(line);
        else log.error(line);
    }
    log.info("verify: max probe discrepancy " + format_number(probe_gap) + ", empirical M " +
             format_number(sweep.max_ratio) + (res.all_pass ? ", all within tolerance" : ", FAILURES"));
    return res;
}

inline int cmd_verify(const ExperimentConfig& file_cfg, const RunOptions& opts, const Logger& log,
                      std::ostream& stdout_sink = std::cout) {
    return guarded(log, [&] {
        const auto cfg = apply_options(file_cfg, opts);
        const Reading reading = opts.strict ? Reading::literal : Reading::consistent;
        const auto res = run_verify(cfg, reading, log);
        const auto meta = detail::base_metadata("verify", cfg, reading);
        if (cfg.output_path.empty()) detail::emit(res.table, meta, cfg.format, stdout_sink);
        else detail::emit_to_file(res.table, meta, cfg.format, cfg.output_path);
        return res.all_pass ? int(exit_ok) : int(exit_failure);
    });
}

} // namespace summakit::cli
