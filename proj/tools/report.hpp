// SPDX-License-Identifier: Apache-2.0
//
// iflab - integer-forcing outage laboratory
// ------------------------------------------------------------------------
//
// Tabular output for the CLI: CSV with a '#' metadata line, or JSON
// {"metadata": {...}, "rows": [...]}. Numbers carry 9 significant digits.

#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace iflab::report {

// empty cell = missing (not applicable or failed)
using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    void add_meta(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }

    std::vector<Cell>& new_row()
    {
        rows.emplace_back(columns.size());
        return rows.back();
    }

    std::size_t col(const std::string& name) const
    {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name)
                return i;
        throw std::out_of_range("unknown column " + name);
    }
};

inline std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::string csv_cell(const Cell& c)
{
    struct V {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(double d) const { return format_number(d); }
        std::string operator()(long long i) const { return std::to_string(i); }
        std::string operator()(const std::string& s) const
        {
            if (s.find_first_of(",\"\n") == std::string::npos)
                return s;
            std::string out = "\"";
            for (char ch : s) {
                if (ch == '"')
                    out += '"';
                out += ch;
            }
            return out + "\"";
        }
    };
    return std::visit(V{}, c);
}

inline void write_csv(std::ostream& os, const Table& t)
{
    os << '#';
    for (const auto& [k, v] : t.metadata)
        os << ' ' << k << '=' << v;
    os << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << csv_cell(row[i]);
        os << '\n';
    }
}

inline void write_json(std::ostream& os, const Table& t)
{
    nlohmann::ordered_json doc;
    doc["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.metadata)
        doc["metadata"][k] = v;
    doc["columns"] = t.columns;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json o = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto& c = row[i];
            if (std::holds_alternative<double>(c)) {
                // JSON has no NaN; mirror the 9-digit CSV text
                const double d = std::get<double>(c);
                o[t.columns[i]] = std::isfinite(d) ? nlohmann::ordered_json(std::stod(format_number(d))) : nullptr;
            } else if (std::holds_alternative<long long>(c)) {
                o[t.columns[i]] = std::get<long long>(c);
            } else if (std::holds_alternative<std::string>(c)) {
                o[t.columns[i]] = std::get<std::string>(c);
            } else {
                o[t.columns[i]] = nullptr;
            }
        }
        doc["rows"].push_back(std::move(o));
    }
    os << doc.dump(2) << '\n';
}

} // namespace iflab::report
