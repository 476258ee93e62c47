#pragma once

// Report serialization. JSON documents are built with nlohmann::json and
// written by hand so that every real number uses %.12e and the output is
// byte-stable; non-finite reals are written as null.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

namespace isoprofile::cli {

using json = nlohmann::ordered_json;

inline std::string format_real(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", x);
    return buf;
}

/// Real number as a JSON value; NaN and infinities become null.
inline json real(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

namespace detail {

inline void indent(std::ostream& out, int depth) {
    for (int i = 0; i < depth; ++i) out << "  ";
}

inline void write_json(std::ostream& out, const json& j, int depth) {
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out << "{}";
            return;
        }
        out << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out << ",\n";
            first = false;
            indent(out, depth + 1);
            out << json(it.key()).dump() << ": ";
            write_json(out, it.value(), depth + 1);
        }
        out << '\n';
        indent(out, depth);
        out << '}';
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out << "[]";
            return;
        }
        // Arrays of scalars stay on one line; table rows read better that way.
        bool scalar = true;
        for (const auto& v : j) scalar = scalar && !v.is_structured();
        if (scalar) {
            out << '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out << ", ";
                write_json(out, j[i], depth);
            }
            out << ']';
            return;
        }
        out << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out << ",\n";
            indent(out, depth + 1);
            write_json(out, j[i], depth + 1);
        }
        out << '\n';
        indent(out, depth);
        out << ']';
        return;
    }
    case json::value_t::number_float:
        out << format_real(j.get<double>());
        return;
    default:
        out << j.dump();
        return;
    }
}

inline std::string csv_cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_number_float()) return format_real(v.get<double>());
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string quoted = "\"";
        for (char c : s) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        return quoted + '"';
    }
    if (v.is_object()) {
        // Flattened as key=value pairs joined by ';'.
        std::string s;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!s.empty()) s += ';';
            s += it.key() + '=' + csv_cell(it.value());
        }
        return s.find_first_of(",\"\n") == std::string::npos ? s : csv_cell(json(s));
    }
    return v.dump();
}

} // namespace detail

inline void write_json(std::ostream& out, const json& doc) {
    detail::write_json(out, doc, 0);
    out << '\n';
}

/// Verdict rows for verify reports, the table otherwise.
inline void write_csv(std::ostream& out, const json& doc) {
    if (doc.contains("table")) {
        const auto& table = doc["table"];
        bool first = true;
        for (const auto& c : table["columns"]) {
            out << (first ? "" : ",") << c.get<std::string>();
            first = false;
        }
        out << '\n';
        for (const auto& row : table["rows"]) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << detail::csv_cell(row[i]);
            out << '\n';
        }
        return;
    }
    out << "beta,verdict,residual,witness\n";
    for (const auto& v : doc["verdicts"]) {
        out << detail::csv_cell(v["beta"]) << ',' << detail::csv_cell(v["verdict"]) << ','
            << detail::csv_cell(v.value("residual", json())) << ','
            << detail::csv_cell(v.value("witness", json())) << '\n';
    }
}

} // namespace isoprofile::cli
