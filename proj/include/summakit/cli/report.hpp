#pragma once

// Report tables and their CSV / JSON serializations. Numbers are written
// with 17 significant digits so reports reload bit-for-bit and diff cleanly.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace summakit::cli {

using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string csv_cell(const Cell& c) {
    struct V {
        std::string operator()(double x) const { return format_number(x); }
        std::string operator()(long long x) const { return std::to_string(x); }
        std::string operator()(const std::string& s) const { return csv_field(s); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(V{}, c);
}

inline std::string json_cell(const Cell& c) {
    struct V {
        std::string operator()(double x) const { return std::isfinite(x) ? format_number(x) : "null"; }
        std::string operator()(long long x) const { return std::to_string(x); }
        std::string operator()(const std::string& s) const { return nlohmann::json(s).dump(); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(V{}, c);
}

} // namespace detail

inline void write_csv(std::ostream& out, const Table& t, bool header = true) {
    if (header) {
        for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << detail::csv_field(t.columns[i]);
        out << '\n';
    }
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << detail::csv_cell(row[i]);
        out << '\n';
    }
}

/// {"metadata": ..., "columns": [...], "rows": [{...}, ...]}
inline void write_json(std::ostream& out, const Table& t, const nlohmann::json& metadata) {
    out << "{\n  \"metadata\": " << metadata.dump() << ",\n  \"columns\": " << nlohmann::json(t.columns).dump()
        << ",\n  \"rows\": [";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out << (r ? ",\n    {" : "\n    {");
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            out << (i ? ", " : "") << nlohmann::json(t.columns[i]).dump() << ": " << detail::json_cell(t.rows[r][i]);
        out << '}';
    }
    out << (t.rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

} // namespace summakit::cli
