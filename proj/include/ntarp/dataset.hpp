#pragma once

// Dataset ingestion (delimited text) and synthetic data generation.

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "features.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace ntarp {

struct Dataset {
  Matrix matrix;
  std::vector<std::string> column_names;
  std::string provenance;  // file path, or a description of the generator
  std::optional<ColumnDictionary> categorical;  // present when columns were one-hot encoded

  std::size_t rows() const noexcept { return matrix.rows(); }
  std::size_t dims() const noexcept { return matrix.cols(); }
};

struct CsvOptions {
  bool header = false;
  char delimiter = ',';
  bool whitespace = false;                  // split on runs of blanks instead of `delimiter`
  std::vector<std::size_t> categorical;     // 0-based input columns to one-hot encode
  std::vector<std::size_t> drop;            // 0-based input columns to ignore
  std::optional<ColumnDictionary> dictionary;  // reuse this encoding instead of building one
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits one record. Double quotes follow RFC 4180 ("" escapes a quote);
// quoted fields cannot span lines.
inline std::vector<std::string> split_record(std::string_view line, const CsvOptions& opt,
                                             std::size_t row) {
  std::vector<std::string> fields;
  if (opt.whitespace) {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i == line.size()) break;
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      fields.emplace_back(line.substr(start, i - start));
    }
    return fields;
  }

  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"' && trim(field).empty()) {
      quoted = true;
      was_quoted = true;
      field.clear();
    } else if (ch == opt.delimiter) {
      fields.push_back(was_quoted ? field : std::string(trim(field)));
      field.clear();
      was_quoted = false;
    } else {
      field.push_back(ch);
    }
  }
  if (quoted) throw ParseError("unterminated quoted field on row " + std::to_string(row), row);
  fields.push_back(was_quoted ? field : std::string(trim(field)));
  return fields;
}

// Locale-independent; accepts a leading '+' which from_chars does not.
inline double parse_real(std::string_view token, std::size_t row, std::size_t column) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("non-numeric value '" + std::string(token) + "' at row " +
                         std::to_string(row) + ", column " + std::to_string(column),
                     row, column);
  }
  if (!std::isfinite(value)) {
    throw ParseError("non-finite value at row " + std::to_string(row) + ", column " +
                         std::to_string(column),
                     row, column);
  }
  return value;
}

inline bool contains(const std::vector<std::size_t>& xs, std::size_t x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

}  // namespace detail

/// Parses delimited text. Numeric columns keep their order; declared
/// categorical columns are one-hot encoded and appended after them with names
/// "<column>=<category>". Row and column numbers in errors are 1-based.
inline Dataset read_csv(std::istream& in, const CsvOptions& opt, std::string provenance = "") {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> record_line;  // file line of each record, for error messages
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split_record(line, opt, line_no);
    if (width == 0) width = fields.size();
    if (fields.size() != width) {
      throw ParseError("ragged row " + std::to_string(line_no) + ": " +
                           std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(width),
                       line_no);
    }
    if (opt.header && header.empty()) {
      header = std::move(fields);
      continue;
    }
    records.push_back(std::move(fields));
    record_line.push_back(line_no);
  }
  if (records.empty()) throw ParseError("no data rows in " + (provenance.empty() ? "input" : provenance));

  for (std::size_t c : opt.categorical) {
    if (c >= width) throw InvalidArgument("categorical column " + std::to_string(c) + " out of range");
  }
  for (std::size_t c : opt.drop) {
    if (c >= width) throw InvalidArgument("dropped column " + std::to_string(c) + " out of range");
  }

  auto name_of = [&](std::size_t c) {
    return header.empty() ? "x" + std::to_string(c + 1) : header[c];
  };

  std::vector<std::size_t> numeric_cols, categorical_cols;
  for (std::size_t c = 0; c < width; ++c) {
    if (detail::contains(opt.drop, c)) continue;
    (detail::contains(opt.categorical, c) ? categorical_cols : numeric_cols).push_back(c);
  }
  if (numeric_cols.empty() && categorical_cols.empty()) {
    throw InvalidArgument("every column was dropped");
  }

  Dataset ds;
  ds.provenance = std::move(provenance);
  Matrix numeric(records.size(), numeric_cols.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    for (std::size_t j = 0; j < numeric_cols.size(); ++j) {
      numeric(r, j) =
          detail::parse_real(records[r][numeric_cols[j]], record_line[r], numeric_cols[j] + 1);
    }
  }
  for (std::size_t c : numeric_cols) ds.column_names.push_back(name_of(c));

  if (categorical_cols.empty()) {
    ds.matrix = std::move(numeric);
    return ds;
  }

  std::vector<std::vector<std::string>> table(records.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    for (std::size_t c : categorical_cols) table[r].push_back(records[r][c]);
  }
  OneHotResult encoded;
  if (opt.dictionary) {
    encoded.data = one_hot_encode(table, *opt.dictionary);
    encoded.dictionary = *opt.dictionary;
  } else {
    encoded = one_hot(table);
  }
  Matrix combined(records.size(), numeric_cols.size() + encoded.data.cols());
  for (std::size_t r = 0; r < records.size(); ++r) {
    auto out = combined.row(r);
    std::copy(numeric.row(r).begin(), numeric.row(r).end(), out.begin());
    std::copy(encoded.data.row(r).begin(), encoded.data.row(r).end(),
              out.begin() + static_cast<std::ptrdiff_t>(numeric_cols.size()));
  }
  for (const auto& col : encoded.dictionary.columns) {
    ds.column_names.push_back(name_of(categorical_cols[col.attribute]) + "=" + col.category);
  }
  ds.matrix = std::move(combined);
  ds.categorical = std::move(encoded.dictionary);
  return ds;
}

inline Dataset load_csv(const std::string& path, const CsvOptions& opt = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_csv(in, opt, path);
}

/// Header row of column names, then values with 17 significant digits so that
/// reading the file back reproduces every double exactly.
inline void write_csv(std::ostream& os, const Dataset& ds, char delimiter = ',') {
  for (std::size_t c = 0; c < ds.dims(); ++c) {
    if (c) os << delimiter;
    os << (c < ds.column_names.size() ? ds.column_names[c] : "x" + std::to_string(c + 1));
  }
  os << '\n';
  std::ostringstream cell;
  cell.imbue(std::locale::classic());
  cell << std::setprecision(17);
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    for (std::size_t c = 0; c < ds.dims(); ++c) {
      cell.str("");
      cell << ds.matrix(r, c);
      if (c) os << delimiter;
      os << cell.str();
    }
    os << '\n';
  }
}

/// m x d i.i.d. standard normal entries; row i draws from stream (seed, i).
inline Dataset generate_gaussian(std::size_t m, std::size_t d, std::uint64_t seed) {
  if (m < 1 || d < 1) throw InvalidArgument("generate_gaussian: m and d must be >= 1");
  Dataset ds;
  ds.matrix = Matrix(m, d);
  for (std::size_t r = 0; r < m; ++r) {
    Rng rng(seed, r);
    for (double& x : ds.matrix.row(r)) x = rng.normal();
  }
  for (std::size_t c = 0; c < d; ++c) ds.column_names.push_back("x" + std::to_string(c + 1));
  ds.provenance = "gaussian(m=" + std::to_string(m) + ", d=" + std::to_string(d) +
                  ", seed=" + std::to_string(seed) + ")";
  return ds;
}

/// Two spherical unit-variance blobs centered at +/- separation * e1, rows
/// alternating between them (even rows: -e1, odd rows: +e1).
inline Dataset generate_two_blobs(std::size_t m, std::size_t d, double separation,
                                  std::uint64_t seed) {
  Dataset ds = generate_gaussian(m, d, seed);
  for (std::size_t r = 0; r < m; ++r) ds.matrix(r, 0) += (r % 2 == 0 ? -separation : separation);
  ds.provenance = "two_blobs(m=" + std::to_string(m) + ", d=" + std::to_string(d) +
                  ", separation=" + std::to_string(separation) +
                  ", seed=" + std::to_string(seed) + ")";
  return ds;
}

/// Uniform row subset of size m_sub without replacement; rows keep their
/// original relative order.
inline Dataset subsample(const Dataset& data, std::size_t m_sub, std::uint64_t seed) {
  if (m_sub < 1 || m_sub > data.rows()) {
    throw InvalidArgument("subsample: m' = " + std::to_string(m_sub) + " outside [1, " +
                          std::to_string(data.rows()) + "]");
  }
  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed, 0x7375627361ULL);
  for (std::size_t i = 0; i < m_sub; ++i) {
    std::swap(order[i], order[i + rng.below(order.size() - i)]);
  }
  order.resize(m_sub);
  std::sort(order.begin(), order.end());

  Dataset out;
  out.matrix = data.matrix.select_rows(order);
  out.column_names = data.column_names;
  out.categorical = data.categorical;
  out.provenance = data.provenance + " | subsample(" + std::to_string(m_sub) +
                   ", seed=" + std::to_string(seed) + ")";
  return out;
}

}  // namespace ntarp
