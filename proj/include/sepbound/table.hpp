#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sepbound/errors.hpp"

namespace sepbound {

enum class TableFormat { csv, tsv, json };

inline TableFormat parse_table_format(std::string_view name) {
    if (name == "csv") return TableFormat::csv;
    if (name == "tsv") return TableFormat::tsv;
    if (name == "json") return TableFormat::json;
    throw DomainError("unknown output format '" + std::string(name) + "'");
}

/// Plot-ready rows with named columns.
class Table {
  public:
    using Cell = std::variant<double, long long, std::string>;

    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns_.size()) throw std::logic_error("table row width does not match header");
        rows_.push_back(std::move(row));
    }

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }

    /// `provenance` goes on a leading '#' line for delimited output and under
    /// "provenance" in the JSON document.
    void write(std::ostream& out, TableFormat format, const std::string& provenance) const {
        if (format == TableFormat::json) {
            write_json(out, provenance);
            return;
        }
        const char delim = format == TableFormat::tsv ? '\t' : ',';
        out << "# " << provenance << '\n';
        for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? std::string(1, delim) : "") << columns_[i];
        out << '\n';
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << delim;
                out << format_cell(row[i]);
            }
            out << '\n';
        }
    }

    /// 9 significant digits.
    static std::string format_number(double v) {
        if (std::isnan(v)) return "nan";
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.9g", v);
        return buf;
    }

  private:
    static std::string format_cell(const Cell& cell) {
        if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
        if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
        return std::get<std::string>(cell);
    }

    void write_json(std::ostream& out, const std::string& provenance) const {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : rows_) {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < row.size(); ++i) {
                const auto& cell = row[i];
                if (const auto* d = std::get_if<double>(&cell)) {
                    // Round through the 9-digit text form; non-finite values become null.
                    obj[columns_[i]] = std::isfinite(*d) ? nlohmann::ordered_json(std::strtod(format_number(*d).c_str(), nullptr))
                                                         : nlohmann::ordered_json(nullptr);
                } else if (const auto* n = std::get_if<long long>(&cell)) {
                    obj[columns_[i]] = *n;
                } else {
                    obj[columns_[i]] = std::get<std::string>(cell);
                }
            }
            rows.push_back(std::move(obj));
        }
        const nlohmann::ordered_json doc = {{"provenance", provenance}, {"columns", columns_}, {"rows", rows}};
        out << doc.dump(2) << '\n';
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

}  // namespace sepbound
