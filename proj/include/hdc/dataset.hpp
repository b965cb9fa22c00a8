#pragma once

// Two-class labeled datasets read from comma-separated text.

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hdc/classify.hpp"
#include "hdc/errors.hpp"

namespace hdc {

struct LabeledDataset {
  Matrix features;                         // n x p, rows are samples
  std::vector<Population> labels;          // length n
  std::vector<std::string> label_names;    // [0] -> Pi1, [1] -> Pi2
  std::vector<std::string> feature_names;  // empty when the file has no header

  int size() const noexcept { return static_cast<int>(labels.size()); }
  int dim() const noexcept { return static_cast<int>(features.cols()); }

  int count(Population p) const { return static_cast<int>(std::count(labels.begin(), labels.end(), p)); }

  // Rows belonging to one population, in file order.
  Matrix group(Population p) const {
    Matrix out(count(p), features.cols());
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < features.rows(); ++i)
      if (labels[static_cast<std::size_t>(i)] == p) out.row(r++) = features.row(i);
    return out;
  }
};

struct CsvOptions {
  // Exactly one of labels_path / label_column is used; with neither, the last
  // column holds the labels.
  std::optional<std::string> labels_path;
  std::optional<std::string> label_column;  // header name or 0-based index
  // Label that becomes Pi1; otherwise the first label seen is Pi1.
  std::optional<std::string> positive_label;
  // Fixed label order (e.g. a training set's), overrides positive_label.
  std::vector<std::string> label_order;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\"");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.emplace_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                                             : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline std::optional<double> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  if (rows.empty()) throw ValidationError("'" + path + "' is empty");
  return rows;
}

}  // namespace detail

/// Reads a features CSV (rows = samples) plus labels from a column or a
/// separate one-label-per-line file. A header row is detected by a
/// non-numeric feature cell on the first line.
inline LabeledDataset ingest_csv(const std::string& features_path, const CsvOptions& opts = {}) {
  auto rows = detail::read_csv_rows(features_path);
  const std::size_t width = rows.front().size();
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (rows[r].size() != width)
      throw ValidationError(features_path + ": ragged row " + std::to_string(r + 1) + " has " +
                            std::to_string(rows[r].size()) + " cells, expected " + std::to_string(width));

  std::optional<std::size_t> label_col;
  bool header = false;
  if (!opts.labels_path) {
    if (opts.label_column) {
      const auto idx = detail::parse_number(*opts.label_column);
      if (idx && *idx >= 0 && std::floor(*idx) == *idx) {
        label_col = static_cast<std::size_t>(*idx);
      } else {
        const auto& first = rows.front();
        const auto it = std::find(first.begin(), first.end(), *opts.label_column);
        if (it == first.end())
          throw ValidationError(features_path + ": no header column named '" + *opts.label_column + "'");
        label_col = static_cast<std::size_t>(it - first.begin());
        header = true;
      }
    } else {
      label_col = width - 1;
    }
    if (*label_col >= width) throw ValidationError(features_path + ": label column index out of range");
    if (width < 2) throw ValidationError(features_path + ": need at least one feature column besides the labels");
  }
  if (!header) {
    for (std::size_t c = 0; c < width; ++c)
      if (c != label_col && !detail::parse_number(rows.front()[c])) header = true;
  }

  LabeledDataset ds;
  const std::size_t first_data = header ? 1 : 0;
  const std::size_t n = rows.size() - first_data;
  if (n == 0) throw ValidationError(features_path + ": no data rows");
  const std::size_t p = label_col ? width - 1 : width;
  if (header)
    for (std::size_t c = 0; c < width; ++c)
      if (c != label_col) ds.feature_names.push_back(rows.front()[c]);

  std::vector<std::string> raw_labels;
  ds.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = rows[r + first_data];
    Eigen::Index f = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (c == label_col) {
        raw_labels.push_back(row[c]);
        continue;
      }
      const auto v = detail::parse_number(row[c]);
      if (!v || !std::isfinite(*v))
        throw ValidationError(features_path + ": non-numeric or non-finite cell '" + row[c] + "' at row " +
                              std::to_string(r + first_data + 1) + ", column " + std::to_string(c + 1));
      ds.features(static_cast<Eigen::Index>(r), f++) = *v;
    }
  }

  if (opts.labels_path) {
    std::ifstream in(*opts.labels_path);
    if (!in) throw ValidationError("cannot open '" + *opts.labels_path + "'");
    std::string line;
    while (std::getline(in, line)) {
      const auto t = detail::trim(line);
      if (!t.empty()) raw_labels.emplace_back(t);
    }
    if (raw_labels.size() == n + 1) raw_labels.erase(raw_labels.begin());
    if (raw_labels.size() != n)
      throw ValidationError(*opts.labels_path + ": " + std::to_string(raw_labels.size()) + " labels for " +
                            std::to_string(n) + " samples");
  }

  std::vector<std::string> order = opts.label_order;
  if (order.empty()) {
    if (opts.positive_label) order.push_back(*opts.positive_label);
    for (const auto& l : raw_labels)
      if (std::find(order.begin(), order.end(), l) == order.end()) order.push_back(l);
    if (order.size() > 2)
      throw ValidationError(features_path + ": found " + std::to_string(order.size()) + " distinct labels, expected 2");
    if (opts.positive_label &&
        std::find(raw_labels.begin(), raw_labels.end(), *opts.positive_label) == raw_labels.end())
      throw ValidationError("positive label '" + *opts.positive_label + "' does not occur in the data");
    if (order.size() != 2)
      throw ValidationError(features_path + ": found a single label, expected exactly 2 classes");
  } else if (order.size() != 2) {
    throw ValidationError("label order must name exactly 2 labels");
  }
  for (const auto& l : raw_labels) {
    if (l == order[0]) ds.labels.push_back(Population::Pi1);
    else if (l == order[1]) ds.labels.push_back(Population::Pi2);
    else throw ValidationError(features_path + ": unexpected label '" + l + "' (known: " + order[0] + ", " + order[1] + ")");
  }
  ds.label_names = std::move(order);
  return ds;
}

}  // namespace hdc
