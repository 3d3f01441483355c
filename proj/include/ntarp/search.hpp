#pragma once

// Random-projection search for statistically significant binary splits.
//
// Candidates are random unit directions. Each is scored by W of the training
// data projected onto it, ranked, and then checked on held-out rows: a split
// that reflects real structure should also give a small W there.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"
#include "null_model.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "withinss.hpp"

namespace ntarp {

struct Direction {
  std::vector<double> components;  // unit Euclidean norm
  std::uint64_t seed_index = 0;    // RNG stream that produced it
};

enum class Verdict { pending, significant, rejected };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pending: return "pending";
    case Verdict::significant: return "significant";
    case Verdict::rejected: return "rejected";
  }
  return "unknown";
}

// How the held-out projection is split during validation.
enum class ThresholdMode {
  reoptimize,  // optimal split of the held-out projection
  fixed,       // reuse the training threshold
};

struct Candidate {
  Direction direction;
  std::optional<SplitResult> train_split;  // empty when the projection is constant
  double train_p = 1.0;
  std::optional<SplitResult> validate_split;
  std::optional<double> validate_p;
  Verdict verdict = Verdict::pending;
  double alpha = 0.0;  // level used when the verdict was set
  std::string note;
};

/// Uniform direction on the unit sphere in R^d (normalized standard normals).
inline Direction random_direction(std::size_t d, Rng& rng, std::uint64_t seed_index = 0) {
  if (d == 0) throw InvalidArgument("random_direction: d must be >= 1");
  Direction dir;
  dir.seed_index = seed_index;
  dir.components.resize(d);
  double norm2 = 0.0;
  while (norm2 == 0.0) {
    norm2 = 0.0;
    for (double& c : dir.components) {
      c = rng.normal();
      norm2 += c * c;
    }
  }
  const double norm = std::sqrt(norm2);
  for (double& c : dir.components) c /= norm;
  return dir;
}

inline std::vector<double> project(const Matrix& data, std::span<const double> direction) {
  if (data.cols() != direction.size()) {
    throw DimensionMismatch("project: data has " + std::to_string(data.cols()) +
                            " columns, direction has " + std::to_string(direction.size()));
  }
  std::vector<double> out(data.rows());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto row = data.row(r);
    double dot = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) dot += row[c] * direction[c];
    out[r] = dot;
  }
  return out;
}

inline std::vector<double> project(const Matrix& data, const Direction& direction) {
  return project(data, direction.components);
}

// Significance level per candidate, optionally Bonferroni-adjusted.
inline double effective_alpha(double alpha, std::size_t n_candidates, bool bonferroni) {
  return bonferroni ? alpha / static_cast<double>(std::max<std::size_t>(n_candidates, 1)) : alpha;
}

struct SearchOptions {
  unsigned workers = 1;
};

/// Scores n_candidates random directions on `train` and returns them sorted by
/// ascending training W (ties by seed_index). Candidate k uses stream
/// (seed, k). Constant projections are kept as rejected candidates at the end.
inline std::vector<Candidate> ntarp_search(const Matrix& train, std::size_t n_candidates,
                                           std::uint64_t seed, SearchOptions options = {}) {
  if (n_candidates < 1) throw InvalidArgument("ntarp_search: n_candidates must be >= 1");
  if (train.rows() < kMinNullSamples) {
    throw InvalidArgument("ntarp_search: need at least 5 training rows, got " +
                          std::to_string(train.rows()));
  }
  if (train.cols() == 0) throw InvalidArgument("ntarp_search: data has no columns");
  bool constant = true;
  for (std::size_t r = 1; r < train.rows() && constant; ++r) {
    constant = std::equal(train.row(r).begin(), train.row(r).end(), train.row(0).begin());
  }
  if (constant) throw DegenerateProjection("ntarp_search: all training rows are identical");

  std::vector<Candidate> candidates(n_candidates);
  parallel_for(n_candidates, options.workers, [&](std::size_t k) {
    Rng rng(seed, k);
    Candidate& c = candidates[k];
    c.direction = random_direction(train.cols(), rng, k);
    const auto projected = project(train, c.direction);
    try {
      c.train_split = optimal_split(projected);
      c.train_p = p_value(c.train_split->w, train.rows());
    } catch (const DegenerateProjection&) {
      c.verdict = Verdict::rejected;
      c.note = "degenerate projection: constant on training data";
    }
  });

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    const bool da = !a.train_split, db = !b.train_split;
    if (da != db) return db;
    if (!da && a.train_split->w != b.train_split->w) return a.train_split->w < b.train_split->w;
    return a.direction.seed_index < b.direction.seed_index;
  });
  return candidates;
}

/// Projects `holdout` onto the candidate's direction, splits it (re-optimized
/// or at the training threshold) and sets the verdict at level alpha.
inline Candidate validate(Candidate candidate, const Matrix& holdout, double alpha,
                          ThresholdMode mode = ThresholdMode::reoptimize) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("validate: alpha must be in (0, 1)");
  if (holdout.rows() < kMinNullSamples) {
    throw InvalidArgument("validate: need at least 5 hold-out rows, got " +
                          std::to_string(holdout.rows()));
  }
  candidate.alpha = alpha;
  candidate.validate_split.reset();
  candidate.validate_p.reset();
  if (!candidate.train_split) {
    candidate.verdict = Verdict::rejected;
    return candidate;
  }

  const auto projected = project(holdout, candidate.direction);
  try {
    candidate.validate_split = mode == ThresholdMode::reoptimize
                                   ? optimal_split(projected)
                                   : split_at_threshold(projected, candidate.train_split->threshold);
  } catch (const DegenerateProjection& e) {
    candidate.verdict = Verdict::rejected;
    candidate.note = std::string("degenerate projection on hold-out data: ") + e.what();
    return candidate;
  }
  candidate.validate_p = p_value(candidate.validate_split->w, holdout.rows());
  candidate.verdict = *candidate.validate_p <= alpha ? Verdict::significant : Verdict::rejected;
  candidate.note.clear();
  return candidate;
}

/// Labels 1 (projection < training threshold) or 2 (>= threshold) per row.
inline std::vector<int> assign(const Matrix& data, const Candidate& candidate) {
  if (!candidate.train_split) throw InvalidArgument("assign: candidate has no training split");
  const auto projected = project(data, candidate.direction);
  std::vector<int> labels(projected.size());
  const double threshold = candidate.train_split->threshold;
  for (std::size_t i = 0; i < projected.size(); ++i) labels[i] = projected[i] < threshold ? 1 : 2;
  return labels;
}

struct HoldoutSplit {
  Matrix train;
  Matrix holdout;
  std::vector<std::size_t> train_rows;    // indices into the input, ascending
  std::vector<std::size_t> holdout_rows;  // indices into the input, ascending
};

/// Uniformly random disjoint row partition with ceil(ratio * m) training rows.
inline HoldoutSplit split_train_validate(const Matrix& data, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw InvalidArgument("split_train_validate: ratio must be in (0, 1)");
  }
  const std::size_t m = data.rows();
  const auto n_train = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(m)));
  if (n_train < kMinNullSamples || m - std::min(n_train, m) < kMinNullSamples) {
    throw InvalidArgument("split_train_validate: both parts need at least 5 rows (m = " +
                          std::to_string(m) + ", train = " + std::to_string(n_train) + ")");
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed, 0x73706C6974ULL);
  for (std::size_t i = m - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

  HoldoutSplit out;
  out.train_rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.holdout_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(out.train_rows.begin(), out.train_rows.end());
  std::sort(out.holdout_rows.begin(), out.holdout_rows.end());
  out.train = data.select_rows(out.train_rows);
  out.holdout = data.select_rows(out.holdout_rows);
  return out;
}

}  // namespace ntarp
