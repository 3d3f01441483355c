#pragma once

// Feature-space preparation: column standardization, one-hot encoding of
// categorical attributes, and monomial extension for non-linear splits.

#include <cmath>
#include <cstddef>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"

namespace ntarp {

// ---------------------------------------------------------------------------
// Monomial extension

/// Monomials of total degree 1..degree in input_dim variables.
///
/// terms[j][i] is the exponent of input feature i in output column j. Terms are
/// graded (all degree-1 terms, then degree 2, ...) and, within a degree, in
/// descending lexicographic order of the exponent vector:
/// p = 2, degree = 2 gives x1, x2, x1^2, x1 x2, x2^2.
struct FeatureMap {
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  unsigned degree = 1;
  std::vector<std::vector<unsigned>> terms;

  // Evaluates every term on one input row.
  std::vector<double> apply(std::span<const double> row) const {
    if (row.size() != input_dim) {
      throw DimensionMismatch("FeatureMap: row has " + std::to_string(row.size()) +
                              " features, expected " + std::to_string(input_dim));
    }
    std::vector<double> out(output_dim);
    for (std::size_t j = 0; j < terms.size(); ++j) {
      double v = 1.0;
      for (std::size_t i = 0; i < input_dim; ++i) {
        for (unsigned e = 0; e < terms[j][i]; ++e) v *= row[i];
      }
      out[j] = v;
    }
    return out;
  }

  Matrix apply(const Matrix& data) const {
    Matrix out(data.rows(), output_dim);
    for (std::size_t r = 0; r < data.rows(); ++r) {
      const auto values = apply(data.row(r));
      std::copy(values.begin(), values.end(), out.row(r).begin());
    }
    return out;
  }
};

inline constexpr std::size_t kDefaultMaxTerms = 10'000;

/// C(p + degree, degree) - 1, or nullopt once it exceeds `cap`.
inline std::optional<std::size_t> monomial_count(std::size_t p, unsigned degree,
                                                 std::size_t cap = kDefaultMaxTerms) {
  // C(p + k, k) built incrementally; each partial product is itself a binomial.
  std::size_t binom = 1;
  for (unsigned k = 1; k <= degree; ++k) {
    binom = binom * (p + k) / k;
    if (binom - 1 > cap) return std::nullopt;
  }
  return binom - 1;
}

inline FeatureMap make_feature_map(std::size_t p, unsigned degree,
                                   std::size_t max_terms = kDefaultMaxTerms) {
  if (degree < 1) throw InvalidArgument("monomial_extend: degree must be >= 1");
  if (p < 1) throw InvalidArgument("monomial_extend: need at least one input feature");
  const auto count = monomial_count(p, degree, max_terms);
  if (!count) {
    long double exact = 1.0L;
    for (unsigned k = 1; k <= degree; ++k) exact = exact * static_cast<long double>(p + k) / k;
    std::ostringstream msg;
    msg << std::setprecision(exact < 1e18L ? 19 : 3) << "monomial_extend: p = " << p
        << ", degree = " << degree << " gives P = " << exact - 1.0L
        << " terms, above the cap of " << max_terms;
    throw InvalidArgument(msg.str());
  }

  FeatureMap map;
  map.input_dim = p;
  map.degree = degree;
  map.terms.reserve(*count);
  // Non-decreasing index tuples i1 <= ... <= ik in lexicographic order yield
  // exponent vectors in descending lexicographic order.
  for (unsigned k = 1; k <= degree; ++k) {
    std::vector<std::size_t> idx(k, 0);
    for (;;) {
      std::vector<unsigned> exps(p, 0);
      for (std::size_t i : idx) ++exps[i];
      map.terms.push_back(std::move(exps));
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == p - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t q = pos; q < k; ++q) idx[q] = idx[pos - 1];
    }
  }
  map.output_dim = map.terms.size();
  return map;
}

struct ExtendedFeatures {
  Matrix data;
  FeatureMap map;
};

/// All monomials of degree <= `degree` in the columns of `data`, without the
/// constant term. Degree 1 returns the input unchanged.
inline ExtendedFeatures monomial_extend(const Matrix& data, unsigned degree,
                                        std::size_t max_terms = kDefaultMaxTerms) {
  FeatureMap map = make_feature_map(data.cols(), degree, max_terms);
  if (degree == 1) return {data, std::move(map)};
  Matrix out = map.apply(data);
  return {std::move(out), std::move(map)};
}

// ---------------------------------------------------------------------------
// One-hot encoding

struct OneHotColumn {
  std::size_t attribute = 0;
  std::string category;
};

// Output column j encodes attribute columns[j].attribute == columns[j].category.
struct ColumnDictionary {
  std::size_t attribute_count = 0;
  std::vector<OneHotColumn> columns;

  // Recovers the categorical table from an encoded matrix.
  std::vector<std::vector<std::string>> decode(const Matrix& encoded) const {
    if (encoded.cols() != columns.size()) {
      throw DimensionMismatch("ColumnDictionary::decode: column count mismatch");
    }
    std::vector<std::vector<std::string>> table(encoded.rows(),
                                                std::vector<std::string>(attribute_count));
    for (std::size_t r = 0; r < encoded.rows(); ++r) {
      for (std::size_t j = 0; j < columns.size(); ++j) {
        if (encoded(r, j) == 1.0) table[r][columns[j].attribute] = columns[j].category;
      }
    }
    return table;
  }
};

struct OneHotResult {
  Matrix data;
  ColumnDictionary dictionary;
};

/// One 0/1 column per (attribute, observed category), attributes in order and
/// categories in order of first appearance. Every token, including a
/// missing-value marker such as "?", is a category of its own.
inline OneHotResult one_hot(const std::vector<std::vector<std::string>>& table) {
  if (table.empty() || table.front().empty()) throw InvalidArgument("one_hot: empty table");
  const std::size_t k = table.front().size();
  for (std::size_t r = 0; r < table.size(); ++r) {
    if (table[r].size() != k) {
      throw ParseError("one_hot: row " + std::to_string(r + 1) + " has " +
                           std::to_string(table[r].size()) + " attributes, expected " +
                           std::to_string(k),
                       r + 1);
    }
  }

  ColumnDictionary dict;
  dict.attribute_count = k;
  std::vector<std::vector<std::size_t>> column_of(table.size(), std::vector<std::size_t>(k));
  for (std::size_t a = 0; a < k; ++a) {
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t r = 0; r < table.size(); ++r) {
      auto [it, inserted] = seen.try_emplace(table[r][a], dict.columns.size());
      if (inserted) dict.columns.push_back({a, table[r][a]});
      column_of[r][a] = it->second;
    }
  }

  Matrix out(table.size(), dict.columns.size(), 0.0);
  for (std::size_t r = 0; r < table.size(); ++r) {
    for (std::size_t a = 0; a < k; ++a) out(r, column_of[r][a]) = 1.0;
  }
  return {std::move(out), std::move(dict)};
}

/// Encodes `table` with an existing dictionary so new rows land in the same
/// columns as the data the dictionary was built from. Unknown categories throw.
inline Matrix one_hot_encode(const std::vector<std::vector<std::string>>& table,
                             const ColumnDictionary& dict) {
  std::vector<std::unordered_map<std::string, std::size_t>> lookup(dict.attribute_count);
  for (std::size_t j = 0; j < dict.columns.size(); ++j) {
    lookup[dict.columns[j].attribute].emplace(dict.columns[j].category, j);
  }
  Matrix out(table.size(), dict.columns.size(), 0.0);
  for (std::size_t r = 0; r < table.size(); ++r) {
    if (table[r].size() != dict.attribute_count) {
      throw ParseError("one_hot_encode: row " + std::to_string(r + 1) + " has " +
                           std::to_string(table[r].size()) + " attributes, expected " +
                           std::to_string(dict.attribute_count),
                       r + 1);
    }
    for (std::size_t a = 0; a < dict.attribute_count; ++a) {
      const auto it = lookup[a].find(table[r][a]);
      if (it == lookup[a].end()) {
        throw ParseError("one_hot_encode: unseen category '" + table[r][a] + "' in attribute " +
                             std::to_string(a + 1) + ", row " + std::to_string(r + 1),
                         r + 1, a + 1);
      }
      out(r, it->second) = 1.0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Standardization

/// Per-column affine map x -> (x - mean) / scale.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> scale;        // population std, or 1 for constant columns
  std::vector<bool> constant;       // column had zero variance

  bool any_constant() const {
    for (bool c : constant) {
      if (c) return true;
    }
    return false;
  }

  Matrix apply(const Matrix& data) const {
    if (data.cols() != mean.size()) {
      throw DimensionMismatch("Standardization: column count mismatch");
    }
    Matrix out(data.rows(), data.cols());
    for (std::size_t r = 0; r < data.rows(); ++r) {
      for (std::size_t c = 0; c < data.cols(); ++c) out(r, c) = (data(r, c) - mean[c]) / scale[c];
    }
    return out;
  }
};

struct StandardizedData {
  Matrix data;
  Standardization transform;
};

/// Centers every column and scales non-constant columns to unit population
/// variance. Constant columns are centered, kept at scale 1 and flagged.
inline StandardizedData standardize(const Matrix& data) {
  if (data.rows() < 2) throw InvalidArgument("standardize: need at least 2 rows");
  const std::size_t m = data.rows();
  Standardization t;
  t.mean.assign(data.cols(), 0.0);
  t.scale.assign(data.cols(), 1.0);
  t.constant.assign(data.cols(), false);
  for (std::size_t c = 0; c < data.cols(); ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < m; ++r) sum += data(r, c);
    const double mu = sum / static_cast<double>(m);
    double ss = 0.0;
    bool constant = true;
    for (std::size_t r = 0; r < m; ++r) {
      ss += (data(r, c) - mu) * (data(r, c) - mu);
      constant = constant && data(r, c) == data(0, c);
    }
    t.mean[c] = constant ? data(0, c) : mu;
    t.constant[c] = constant;
    if (!constant) t.scale[c] = std::sqrt(ss / static_cast<double>(m));
  }
  Matrix out = t.apply(data);
  return {std::move(out), std::move(t)};
}

}  // namespace ntarp
