#pragma once

// Experiment configuration: JSON schema, validation and materialization of
// the matrices, factors and series it names.
//
//   {
//     "matrix_a": {"type": "cesaro"},
//     "matrix_b": {"type": "riesz", "weights": {"kind": "power", "alpha": 0.5}},
//     "lambda":   {"type": "constant", "c": 1},
//     "series":   {"type": "alternating", "beta": 1},
//     "k": 1, "N": 200,
//     "tail":     {"cutoff": 3200, "warn_threshold": 1e-6, "allow_cap": false},
//     "output":   {"format": "csv", "path": "reports"},
//     "conditions": ["C9", "C10"],
//     "seed": 1
//   }
//
// Matrix types: identity, cesaro, riesz (weights kind constant | power |
// geometric | explicit), explicit ("entries" rows, or "file" holding them).
// Lambda types: constant (c), power (c, alpha), explicit (values),
// riesz_adapted (scale). Series types: explicit (values), alternating (beta),
// probe (kind, v). Relative file paths resolve against the config's directory.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "summakit/summakit.hpp"

namespace summakit::cli {

using json = nlohmann::json;

/// Invalid or unreadable configuration. `field` is the dotted path of the
/// offending entry.
class config_error : public error {
public:
    config_error(std::string field, const std::string& what)
        : error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class OutputFormat { csv, json };

inline OutputFormat parse_format(const std::string& text, const std::string& field = "output.format") {
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    throw config_error(field, "expected csv or json, got '" + text + "'");
}

inline std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

struct WeightSpec {
    std::string kind = "constant";  // constant | power | geometric | explicit
    double value = 1.0;             // constant value, power alpha or geometric ratio
    std::vector<double> values;     // explicit
};

struct MatrixSpec {
    std::string type = "identity";  // identity | cesaro | riesz | explicit
    WeightSpec weights;
    std::vector<std::vector<double>> entries;
};

struct LambdaSpec {
    std::string type = "constant";  // constant | power | explicit | riesz_adapted
    double c = 1.0;
    double alpha = 0.0;
    std::vector<double> values;
};

struct SeriesSpec {
    std::string type = "alternating";  // explicit | alternating | probe
    std::vector<double> values;
    double beta = 1.0;
    ProbeKind probe_kind = ProbeKind::difference;
    std::size_t probe_v = 1;
};

struct ExperimentConfig {
    MatrixSpec matrix_a;
    MatrixSpec matrix_b;
    LambdaSpec lambda;
    std::optional<SeriesSpec> series;
    double k = 1.0;
    std::size_t N = 2;
    TailSpec tail;
    OutputFormat format = OutputFormat::csv;
    std::string output_path;
    std::vector<ConditionId> conditions;  // empty: defaults for the matrix pair
    std::uint64_t seed = 1;
    json source;  // the parsed document, echoed into report metadata
};

namespace detail {

inline const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) throw config_error(path + "." + key, "missing");
    return obj.at(key);
}

inline double number(const json& v, const std::string& path) {
    if (!v.is_number()) throw config_error(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw config_error(path, "must be finite");
    return x;
}

inline double number_or(const json& obj, const char* key, double fallback, const std::string& path) {
    return obj.contains(key) ? number(obj.at(key), path + "." + key) : fallback;
}

inline std::size_t index_value(const json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<long long>() < 0) throw config_error(path, "expected a non-negative integer");
    return v.get<std::size_t>();
}

inline std::string text(const json& v, const std::string& path) {
    if (!v.is_string()) throw config_error(path, "expected a string");
    return v.get<std::string>();
}

inline std::vector<double> number_list(const json& v, const std::string& path) {
    if (!v.is_array()) throw config_error(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline json read_json_file(const std::filesystem::path& file, const std::string& path) {
    std::ifstream in(file);
    if (!in) throw config_error(path, "cannot open '" + file.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error(path, std::string("invalid JSON in '") + file.string() + "': " + e.what());
    }
}

inline WeightSpec parse_weights(const json& w, const std::string& path) {
    WeightSpec out;
    out.kind = text(require(w, "kind", path), path + ".kind");
    if (out.kind == "constant") {
        out.value = number_or(w, "value", 1.0, path);
        if (!(out.value > 0.0)) throw config_error(path + ".value", "must be positive");
    } else if (out.kind == "power") {
        out.value = number(require(w, "alpha", path), path + ".alpha");
    } else if (out.kind == "geometric") {
        out.value = number(require(w, "ratio", path), path + ".ratio");
        if (!(out.value > 0.0)) throw config_error(path + ".ratio", "must be positive");
    } else if (out.kind == "explicit") {
        out.values = number_list(require(w, "values", path), path + ".values");
        if (out.values.empty()) throw config_error(path + ".values", "empty weight list");
        for (double p : out.values)
            if (!(p > 0.0)) throw config_error(path + ".values", "weights must be positive");
    } else {
        throw config_error(path + ".kind", "unknown weight kind '" + out.kind + "'");
    }
    return out;
}

inline std::vector<std::vector<double>> parse_rows(const json& rows, const std::string& path) {
    if (!rows.is_array()) throw config_error(path, "expected an array of rows");
    std::vector<std::vector<double>> out;
    for (std::size_t n = 0; n < rows.size(); ++n)
        out.push_back(number_list(rows[n], path + "[" + std::to_string(n) + "]"));
    if (out.empty()) throw config_error(path, "no rows");
    return out;
}

inline MatrixSpec parse_matrix(const json& m, const std::string& path, const std::filesystem::path& base) {
    MatrixSpec out;
    out.type = text(require(m, "type", path), path + ".type");
    if (out.type == "identity" || out.type == "cesaro") return out;
    if (out.type == "riesz") {
        out.weights = parse_weights(require(m, "weights", path), path + ".weights");
        return out;
    }
    if (out.type == "explicit") {
        if (m.contains("entries")) {
            out.entries = parse_rows(m.at("entries"), path + ".entries");
        } else if (m.contains("file")) {
            const auto file = base / text(m.at("file"), path + ".file");
            const json doc = read_json_file(file, path + ".file");
            out.entries = parse_rows(doc.is_object() ? require(doc, "entries", path + ".file") : doc,
                                     path + ".file");
        } else {
            throw config_error(path + ".entries", "missing");
        }
        return out;
    }
    throw config_error(path + ".type", "unknown matrix type '" + out.type + "'");
}

inline LambdaSpec parse_lambda(const json& l, const std::string& path) {
    LambdaSpec out;
    out.type = text(require(l, "type", path), path + ".type");
    if (out.type == "constant") {
        out.c = number_or(l, "c", 1.0, path);
    } else if (out.type == "power") {
        out.c = number_or(l, "c", 1.0, path);
        out.alpha = number(require(l, "alpha", path), path + ".alpha");
    } else if (out.type == "explicit") {
        out.values = number_list(require(l, "values", path), path + ".values");
    } else if (out.type == "riesz_adapted") {
        out.c = number_or(l, "scale", 1.0, path);
    } else {
        throw config_error(path + ".type", "unknown lambda type '" + out.type + "'");
    }
    return out;
}

inline SeriesSpec parse_series(const json& s, const std::string& path) {
    SeriesSpec out;
    out.type = text(require(s, "type", path), path + ".type");
    if (out.type == "explicit") {
        out.values = number_list(require(s, "values", path), path + ".values");
        if (out.values.empty()) throw config_error(path + ".values", "empty series");
    } else if (out.type == "alternating") {
        out.beta = number_or(s, "beta", 1.0, path);
    } else if (out.type == "probe") {
        const auto kind = text(require(s, "kind", path), path + ".kind");
        if (kind == "difference") out.probe_kind = ProbeKind::difference;
        else if (kind == "shift") out.probe_kind = ProbeKind::shift;
        else throw config_error(path + ".kind", "expected difference or shift");
        out.probe_v = index_value(require(s, "v", path), path + ".v");
    } else {
        throw config_error(path + ".type", "unknown series type '" + out.type + "'");
    }
    return out;
}

} // namespace detail

/// Parse and validate a configuration document. `base` resolves relative
/// file references.
inline ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base = {}) {
    if (!doc.is_object()) throw config_error("config", "expected a JSON object");
    ExperimentConfig cfg;
    cfg.source = doc;

    cfg.k = detail::number(detail::require(doc, "k", "config"), "k");
    if (!(cfg.k >= 1.0)) throw config_error("k", "must be >= 1, got " + doc.at("k").dump());
    cfg.N = detail::index_value(detail::require(doc, "N", "config"), "N");
    if (cfg.N < 2) throw config_error("N", "must be >= 2, got " + std::to_string(cfg.N));

    cfg.matrix_a = detail::parse_matrix(detail::require(doc, "matrix_a", "config"), "matrix_a", base);
    cfg.matrix_b = doc.contains("matrix_b") ? detail::parse_matrix(doc.at("matrix_b"), "matrix_b", base)
                                            : cfg.matrix_a;
    cfg.lambda = doc.contains("lambda") ? detail::parse_lambda(doc.at("lambda"), "lambda") : LambdaSpec{};
    if (doc.contains("series")) cfg.series = detail::parse_series(doc.at("series"), "series");

    cfg.tail = TailSpec::default_for(cfg.N);
    if (doc.contains("tail")) {
        const json& t = doc.at("tail");
        if (t.contains("cutoff")) cfg.tail.cutoff = detail::index_value(t.at("cutoff"), "tail.cutoff");
        cfg.tail.warn_threshold = detail::number_or(t, "warn_threshold", cfg.tail.warn_threshold, "tail");
        if (t.contains("allow_cap")) {
            if (!t.at("allow_cap").is_boolean()) throw config_error("tail.allow_cap", "expected a boolean");
            cfg.tail.allow_cap = t.at("allow_cap").get<bool>();
        }
    }

    if (doc.contains("output")) {
        const json& o = doc.at("output");
        if (o.contains("format")) cfg.format = parse_format(detail::text(o.at("format"), "output.format"));
        if (o.contains("path")) cfg.output_path = detail::text(o.at("path"), "output.path");
    }
    if (doc.contains("conditions")) {
        const json& list = doc.at("conditions");
        if (!list.is_array()) throw config_error("conditions", "expected an array of condition ids");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto name = detail::text(list[i], "conditions[" + std::to_string(i) + "]");
            ConditionId id{};
            if (!parse_condition_id(name, id))
                throw config_error("conditions[" + std::to_string(i) + "]", "unknown condition '" + name + "'");
            cfg.conditions.push_back(id);
        }
    }
    if (doc.contains("seed")) cfg.seed = detail::index_value(doc.at("seed"), "seed");
    return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& file) {
    const json doc = detail::read_json_file(file, "config");
    return parse_config(doc, file.parent_path());
}

/// Re-check the tail after command-line overrides.
inline void validate_tail_override(const ExperimentConfig& cfg) {
    try {
        validate_tail(cfg.tail, cfg.N);
    } catch (const bad_tail& e) {
        throw config_error("tail", e.what());
    }
}

// ---------------------------------------------------------------------------
// Materialization

inline WeightFamily weight_family(const WeightSpec& w) {
    if (w.kind == "constant") return WeightFamily::constant(w.value);
    if (w.kind == "power") return WeightFamily::power(w.value);
    if (w.kind == "geometric") return WeightFamily::geometric(w.value);
    return WeightFamily::explicit_values(w.values);
}

/// The family behind a matrix spec. Explicit entries are validated here, so a
/// zero diagonal surfaces as zero_diagonal.
inline MatrixFamily matrix_family(const MatrixSpec& m) {
    if (m.type == "identity") return MatrixFamily::identity();
    if (m.type == "cesaro") return MatrixFamily::cesaro();
    if (m.type == "riesz") return MatrixFamily::riesz(weight_family(m.weights));
    return MatrixFamily::explicit_matrix(make_normal(m.entries, m.entries.size() - 1));
}

/// Matrices and factors of a configuration at the evaluation order N. The
/// families are kept so that tail sums can materialize B further out.
struct Instance {
    MatrixFamily family_a;
    MatrixFamily family_b;
    NormalMatrix<double> a;
    NormalMatrix<double> b;
    FactorSequence<double> lambda;
};

inline FactorSequence<double> make_lambda(const LambdaSpec& l, const NormalMatrix<double>& a,
                                          const NormalMatrix<double>& b, double k, std::size_t length) {
    if (l.type == "constant") return constant_factors(length, l.c);
    if (l.type == "power") return power_factors(length, l.c, l.alpha);
    if (l.type == "riesz_adapted") return adapted_factors(a, b, k, l.c, length);
    if (l.values.size() < length)
        throw config_error("lambda.values", "needs " + std::to_string(length) + " values, got " +
                                                std::to_string(l.values.size()));
    return FactorSequence<double>(std::vector<double>(l.values.begin(), l.values.begin() + static_cast<std::ptrdiff_t>(length)));
}

inline Instance materialize(const ExperimentConfig& cfg) {
    auto fa = matrix_family(cfg.matrix_a);
    auto fb = matrix_family(cfg.matrix_b);
    for (const auto* f : {&fa, &fb}) {
        const auto top = f->max_order();
        if (top && *top < cfg.N)
            throw config_error(f == &fa ? "matrix_a" : "matrix_b",
                               f->name() + " matrix has order " + std::to_string(*top) + ", N = " + std::to_string(cfg.N));
    }
    auto a = fa.materialize(cfg.N);
    auto b = fb.materialize(cfg.N);
    auto lambda = make_lambda(cfg.lambda, a, b, cfg.k, cfg.N + 1);
    return Instance{std::move(fa), std::move(fb), std::move(a), std::move(b), std::move(lambda)};
}

inline SeriesSample<double> make_series(const SeriesSpec& s, std::size_t order) {
    if (s.type == "alternating") return alternating_series(order, s.beta);
    if (s.type == "probe") {
        if (s.probe_v + 1 > order) throw config_error("series.v", "probe index must satisfy v + 1 <= N");
        return probe_series<double>(order, s.probe_v, s.probe_kind);
    }
    if (s.values.empty()) throw config_error("series.values", "empty series");
    if (s.values.size() < order + 1)
        throw config_error("series.values", "needs N + 1 = " + std::to_string(order + 1) + " values, got " +
                                                std::to_string(s.values.size()));
    return SeriesSample<double>(std::vector<double>(s.values.begin(), s.values.begin() + static_cast<std::ptrdiff_t>(order + 1)));
}

/// Conditions evaluated when the config does not list any: C9-C16, the Riesz
/// criteria when both matrices are Riesz, and the c_nv column bound.
inline std::vector<ConditionId> default_conditions(const Instance& inst) {
    std::vector<ConditionId> out{ConditionId::C9,  ConditionId::C10, ConditionId::C11, ConditionId::C12,
                                 ConditionId::C13, ConditionId::C14, ConditionId::C15, ConditionId::C16};
    if (inst.family_a.is_riesz() && inst.family_b.is_riesz()) {
        out.push_back(ConditionId::TA_a);
        out.push_back(ConditionId::TA_b);
        out.push_back(ConditionId::TA_c);
    }
    out.push_back(ConditionId::L1LK);
    return out;
}

/// Explicit matrix spec for `m`, suitable for a config file.
inline json matrix_to_json(const NormalMatrix<double>& m) {
    json rows = json::array();
    for (std::size_t n = 0; n < m.size(); ++n) {
        json row = json::array();
        for (std::size_t v = 0; v <= n; ++v) row.push_back(m(n, v));
        rows.push_back(std::move(row));
    }
    return json{{"type", "explicit"}, {"entries", std::move(rows)}};
}

} // namespace summakit::cli
