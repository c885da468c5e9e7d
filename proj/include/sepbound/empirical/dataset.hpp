#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "sepbound/errors.hpp"

namespace sepbound {

/// Labeled feature vectors with optional predicted probabilities.
///
/// Features and probabilities are stored row-major. `num_classes` is C; every
/// label lies in [0, C).
struct FeatureDataset {
    std::vector<int> labels;
    std::size_t dim = 0;
    std::vector<double> features;
    std::optional<std::vector<double>> yhat_true;
    std::optional<std::vector<double>> prob_matrix;
    int num_classes = 0;

    std::size_t size() const { return labels.size(); }

    std::span<const double> feature(std::size_t i) const { return {features.data() + i * dim, dim}; }

    std::span<const double> probs(std::size_t i) const {
        return {prob_matrix->data() + i * static_cast<std::size_t>(num_classes),
                static_cast<std::size_t>(num_classes)};
    }

    /// Indices of the samples labeled c, in file order.
    std::vector<std::size_t> indices_of(int c) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == c) out.push_back(i);
        return out;
    }

    /// Throws ValidationError naming the first violated invariant.
    /// With `require_all_classes` every class in [0, C) must occur.
    /// `source_lines[i]`, when given, is the file line of sample i.
    void validate(bool require_all_classes = true, std::span<const std::size_t> source_lines = {}) const;
};

struct LoadOptions {
    /// Overrides the class count inferred from the labels; classes may then be absent.
    std::optional<int> num_classes;
};

namespace detail {

inline constexpr double probability_sum_tol = 1e-6;

inline double parse_double(std::string_view text, std::size_t line, std::string_view column) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\r')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || end != text.data() + text.size())
        throw ParseError(line, "column '" + std::string(column) + "': cannot parse '" + std::string(text) +
                                   "' as a number");
    return value;
}

inline std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\r' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

// Index in `name` after `prefix`, when name is prefix followed by decimal digits.
inline std::optional<std::size_t> indexed_column(std::string_view name, char prefix) {
    if (name.size() < 2 || name.front() != prefix) return std::nullopt;
    std::size_t idx = 0;
    const auto [end, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
    if (ec != std::errc() || end != name.data() + name.size()) return std::nullopt;
    return idx;
}

// Columns p0.. or f0.. must be contiguous from zero.
inline std::vector<std::size_t> ordered_columns(std::vector<std::pair<std::size_t, std::size_t>> found, char prefix,
                                                std::size_t header_line) {
    std::vector<std::size_t> cols(found.size(), static_cast<std::size_t>(-1));
    for (const auto& [idx, col] : found) {
        if (idx >= found.size() || cols[idx] != static_cast<std::size_t>(-1))
            throw ParseError(header_line, std::string("columns '") + prefix + "0'.. must be numbered 0.." +
                                              std::to_string(found.size() - 1) + " without gaps or repeats");
        cols[idx] = col;
    }
    return cols;
}

}  // namespace detail

inline void FeatureDataset::validate(bool require_all_classes, std::span<const std::size_t> source_lines) const {
    const std::size_t m = labels.size();
    const auto where = [&](std::size_t i) {
        return i < source_lines.size() ? "line " + std::to_string(source_lines[i])
                                       : "sample " + std::to_string(i);
    };
    if (m == 0) throw ValidationError("dataset has no samples");
    if (dim < 1) throw ValidationError("dataset needs at least one feature column");
    if (num_classes < 2) throw ValidationError("dataset needs at least two classes");
    if (features.size() != m * dim) throw ValidationError("feature storage does not match samples x dim");
    std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes), 0);
    for (std::size_t i = 0; i < m; ++i) {
        if (labels[i] < 0 || labels[i] >= num_classes)
            throw ValidationError(where(i) + ": class " + std::to_string(labels[i]) +
                                  " outside [0, " + std::to_string(num_classes) + ")");
        ++counts[static_cast<std::size_t>(labels[i])];
    }
    if (require_all_classes) {
        for (int c = 0; c < num_classes; ++c)
            if (counts[static_cast<std::size_t>(c)] == 0)
                throw ValidationError("class " + std::to_string(c) + " has no samples");
    }
    if (yhat_true) {
        if (yhat_true->size() != m) throw ValidationError("yhat column length does not match samples");
        for (std::size_t i = 0; i < m; ++i) {
            const double y = (*yhat_true)[i];
            if (!(y > 0.0 && y <= 1.0))
                throw ValidationError(where(i) + ": yhat " + std::to_string(y) +
                                      " outside (0, 1]");
        }
    }
    if (prob_matrix) {
        if (prob_matrix->size() != m * static_cast<std::size_t>(num_classes))
            throw ValidationError("probability columns do not match the class count " +
                                  std::to_string(num_classes));
        for (std::size_t i = 0; i < m; ++i) {
            double sum = 0.0;
            for (double p : probs(i)) {
                if (!(p >= 0.0 && p <= 1.0))
                    throw ValidationError(where(i) + ": probability outside [0, 1]");
                sum += p;
            }
            if (std::abs(sum - 1.0) > detail::probability_sum_tol)
                throw ValidationError(where(i) + ": probabilities sum to " +
                                      std::to_string(sum) + ", not 1");
            if (yhat_true &&
                std::abs(probs(i)[static_cast<std::size_t>(labels[i])] - (*yhat_true)[i]) >
                    detail::probability_sum_tol)
                throw ValidationError(where(i) + ": yhat disagrees with p" +
                                      std::to_string(labels[i]));
        }
    }
}

/// Reads a delimiter-separated dataset (comma or tab, detected from the header).
///
/// Recognized columns are `class`, `yhat`, `p0`..`p{C-1}` and `f0`..`f{n-1}`;
/// other columns are ignored, as are blank lines and lines starting with '#'.
/// When `yhat` is absent but probabilities are present it is taken from the
/// true-class probability. Validation failures name the offending line.
inline FeatureDataset read_dataset(std::istream& in, const LoadOptions& options = {}) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t header_line = 0;
    std::vector<std::string_view> header;
    std::string header_text;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        header_text = line;
        header_line = line_no;
        break;
    }
    if (header_line == 0) throw ParseError(line_no, "missing header row");
    const char delim = header_text.find('\t') != std::string::npos ? '\t' : ',';
    header = detail::split(header_text, delim);

    std::optional<std::size_t> class_col;
    std::optional<std::size_t> yhat_col;
    std::vector<std::pair<std::size_t, std::size_t>> f_found;
    std::vector<std::pair<std::size_t, std::size_t>> p_found;
    for (std::size_t col = 0; col < header.size(); ++col) {
        const auto name = detail::trim(header[col]);
        if (name == "class") {
            class_col = col;
        } else if (name == "yhat") {
            yhat_col = col;
        } else if (auto f = detail::indexed_column(name, 'f')) {
            f_found.emplace_back(*f, col);
        } else if (auto p = detail::indexed_column(name, 'p')) {
            p_found.emplace_back(*p, col);
        }
    }
    if (!class_col) throw ParseError(header_line, "missing required column 'class'");
    if (f_found.empty()) throw ParseError(header_line, "need at least one feature column 'f0'");
    const auto f_cols = detail::ordered_columns(f_found, 'f', header_line);
    const auto p_cols = detail::ordered_columns(p_found, 'p', header_line);

    FeatureDataset ds;
    ds.dim = f_cols.size();
    std::vector<double> yhat;
    std::vector<double> probs;
    std::vector<std::size_t> row_lines;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto fields = detail::split(line, delim);
        if (fields.size() != header.size())
            throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                          std::to_string(fields.size()));
        const double label = detail::parse_double(fields[*class_col], line_no, "class");
        if (!(label >= 0.0) || label != std::floor(label) || label > 1e9)
            throw ParseError(line_no, "class must be a nonnegative integer");
        ds.labels.push_back(static_cast<int>(label));
        for (std::size_t j = 0; j < f_cols.size(); ++j)
            ds.features.push_back(detail::parse_double(fields[f_cols[j]], line_no, "f" + std::to_string(j)));
        if (yhat_col) yhat.push_back(detail::parse_double(fields[*yhat_col], line_no, "yhat"));
        for (std::size_t j = 0; j < p_cols.size(); ++j)
            probs.push_back(detail::parse_double(fields[p_cols[j]], line_no, "p" + std::to_string(j)));
        row_lines.push_back(line_no);
    }
    if (ds.labels.empty()) throw ParseError(line_no, "no data rows");

    int max_label = 0;
    for (int c : ds.labels) max_label = std::max(max_label, c);
    ds.num_classes = options.num_classes.value_or(std::max(max_label + 1, static_cast<int>(p_cols.size())));
    if (!p_cols.empty() && static_cast<int>(p_cols.size()) != ds.num_classes)
        throw ValidationError("found " + std::to_string(p_cols.size()) + " probability columns for " +
                              std::to_string(ds.num_classes) + " classes");
    if (yhat_col) ds.yhat_true = std::move(yhat);
    if (!p_cols.empty()) {
        ds.prob_matrix = std::move(probs);
        if (!ds.yhat_true) {
            std::vector<double> derived(ds.size());
            for (std::size_t i = 0; i < ds.size(); ++i)
                derived[i] = (*ds.prob_matrix)[i * p_cols.size() + static_cast<std::size_t>(ds.labels[i])];
            ds.yhat_true = std::move(derived);
        }
    }
    ds.validate(!options.num_classes.has_value(), row_lines);
    return ds;
}

inline FeatureDataset load_dataset(const std::string& path, const LoadOptions& options = {}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_dataset(in, options);
}

/// Writes the format read_dataset accepts; numbers use 17 significant digits.
inline void write_dataset(std::ostream& out, const FeatureDataset& ds) {
    std::string row = "class";
    if (ds.yhat_true) row += ",yhat";
    if (ds.prob_matrix)
        for (int c = 0; c < ds.num_classes; ++c) row += ",p" + std::to_string(c);
    for (std::size_t j = 0; j < ds.dim; ++j) row += ",f" + std::to_string(j);
    out << row << '\n';
    char buf[32];
    const auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, ",%.17g", v);
        out << buf;
    };
    for (std::size_t i = 0; i < ds.size(); ++i) {
        out << ds.labels[i];
        if (ds.yhat_true) put((*ds.yhat_true)[i]);
        if (ds.prob_matrix)
            for (double p : ds.probs(i)) put(p);
        for (double f : ds.feature(i)) put(f);
        out << '\n';
    }
}

}  // namespace sepbound
