#pragma once

// Normalized withinss W of a one-dimensional point set.
//
// For values a_1..a_m, W is the smallest achievable within-cluster sum of
// squares over binary partitions, divided by m times the population variance.
// Equivalently W = 1 - max R^2, where R^2 is the share of variance explained by
// the cluster-membership indicator. Optimal clusters in 1D are intervals, so
// only the m - 1 threshold splits of the sorted values need to be examined.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace ntarp {

struct SplitResult {
  double w = 1.0;          // normalized withinss in [0, 1]
  double explained = 0.0;  // between-cluster variance Var(E[Y | cluster])
  double threshold = 0.0;  // values < threshold form the left cluster
  std::size_t left_size = 0;
  std::size_t right_size = 0;
  double mu_left = 0.0;
  double mu_right = 0.0;
  double r_squared = 0.0;  // explained / total variance
};

/// Variance of the cluster-mean random variable for a two-cluster partition:
/// (mu_left - mu_right)^2 * |C1| * |C2| / m^2.
inline double between_variance(double mu_left, double mu_right, std::size_t left_size,
                               std::size_t right_size, std::size_t m) {
  if (left_size == 0 || right_size == 0 || left_size + right_size != m) {
    throw InvalidArgument("between_variance: cluster sizes must be positive and sum to m");
  }
  const double diff = mu_left - mu_right;
  const double md = static_cast<double>(m);
  return diff * diff * (static_cast<double>(left_size) / md) *
         (static_cast<double>(right_size) / md);
}

namespace detail {

// Statistics of the partition sorted[0, k) | sorted[k, m). Sums run over
// `centered` (sorted minus its mean) so that a large common offset does not
// cancel; means are shifted back by `center` for reporting.
inline SplitResult summarize_sorted_split(std::span<const double> sorted,
                                          std::span<const double> centered, double center,
                                          std::size_t k) {
  const std::size_t m = sorted.size();
  SplitResult r;
  r.left_size = k;
  r.right_size = m - k;

  double sum_left = 0.0, sum_right = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum_left += centered[i];
  for (std::size_t i = k; i < m; ++i) sum_right += centered[i];
  const double mean_left = sum_left / static_cast<double>(k);
  const double mean_right = sum_right / static_cast<double>(m - k);
  const double mean_all = (sum_left + sum_right) / static_cast<double>(m);

  double within = 0.0, total_ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = centered[i] - (i < k ? mean_left : mean_right);
    within += d * d;
    total_ss += (centered[i] - mean_all) * (centered[i] - mean_all);
  }

  const double total_variance = total_ss / static_cast<double>(m);
  r.mu_left = center + mean_left;
  r.mu_right = center + mean_right;
  r.w = std::clamp(within / total_ss, 0.0, 1.0);
  r.explained = between_variance(mean_left, mean_right, k, m - k, m);
  r.r_squared = std::clamp(r.explained / total_variance, 0.0, 1.0);

  // Midpoint of the gap. For adjacent doubles the midpoint can round onto the
  // lower value, which would move it to the right cluster; use the upper value.
  const double lo = sorted[k - 1];
  const double hi = sorted[k];
  r.threshold = lo + (hi - lo) / 2.0;
  if (!(r.threshold > lo)) r.threshold = hi;
  return r;
}

// Sorted copy of the input and the same values minus their mean.
struct SortedValues {
  std::vector<double> sorted;
  std::vector<double> centered;
  double center = 0.0;
};

inline SortedValues sort_and_center(std::span<const double> values) {
  SortedValues out;
  out.sorted.assign(values.begin(), values.end());
  std::sort(out.sorted.begin(), out.sorted.end());
  for (double v : out.sorted) out.center += v;
  out.center /= static_cast<double>(out.sorted.size());
  out.centered.resize(out.sorted.size());
  for (std::size_t i = 0; i < out.sorted.size(); ++i) {
    out.centered[i] = out.sorted[i] - out.center;
  }
  return out;
}

inline double centered_sum_of_squares(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mu = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  return ss;
}

inline void require_splittable(std::span<const double> values, const char* who) {
  if (values.size() < 2) {
    throw InvalidArgument(std::string(who) + ": need at least 2 values, got " +
                          std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string(who) + ": non-finite value");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) throw DegenerateProjection();
}

}  // namespace detail

/// Optimal binary split of a 1D point set, O(m log m).
///
/// The values are sorted, then centered and divided by their range before a
/// single prefix-sum scan over the thresholds between distinct neighbours.
/// Among splits whose explained variance ties (relative 1e-12) the one with
/// the smallest left cluster wins. Statistics of the chosen split are then
/// recomputed two-pass on the centered values.
///
/// Throws DegenerateProjection when all values are equal and InvalidArgument
/// for fewer than two values.
inline SplitResult optimal_split(std::span<const double> values) {
  detail::require_splittable(values, "optimal_split");
  const std::size_t m = values.size();
  const auto v = detail::sort_and_center(values);

  const double range = v.sorted.back() - v.sorted.front();
  std::vector<double> scaled(m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    scaled[i] = v.centered[i] / range;
    total += scaled[i];
  }

  constexpr double kTieTolerance = 1e-12;
  const double md = static_cast<double>(m);
  double best = -1.0;
  std::size_t best_k = 0;
  double prefix = 0.0;
  for (std::size_t k = 1; k < m; ++k) {
    prefix += scaled[k - 1];
    if (!(v.sorted[k - 1] < v.sorted[k])) continue;
    const double kd = static_cast<double>(k);
    const double diff = prefix / kd - (total - prefix) / (md - kd);
    const double explained = diff * diff * (kd / md) * ((md - kd) / md);
    if (explained > best * (1.0 + kTieTolerance)) {
      best = explained;
      best_k = k;
    }
  }

  return detail::summarize_sorted_split(v.sorted, v.centered, v.center, best_k);
}

/// Statistics of the split induced by a fixed threshold: values < threshold go
/// left, values >= threshold go right. Throws DegenerateProjection when either
/// side would be empty or the values are constant.
inline SplitResult split_at_threshold(std::span<const double> values, double threshold) {
  detail::require_splittable(values, "split_at_threshold");
  const auto v = detail::sort_and_center(values);
  const auto k = static_cast<std::size_t>(
      std::lower_bound(v.sorted.begin(), v.sorted.end(), threshold) - v.sorted.begin());
  if (k == 0 || k == v.sorted.size()) {
    throw DegenerateProjection("threshold leaves one cluster empty");
  }
  SplitResult r = detail::summarize_sorted_split(v.sorted, v.centered, v.center, k);
  r.threshold = threshold;
  return r;
}

/// Minimum W over every partition of the multiset into two nonempty clusters,
/// not only threshold splits. Exponential; a test oracle for m <= 15.
inline double brute_force_optimal_w(std::span<const double> values) {
  if (values.size() < 2 || values.size() > 15) {
    throw InvalidArgument("brute_force_optimal_w: need 2 <= m <= 15, got " +
                          std::to_string(values.size()));
  }
  detail::require_splittable(values, "brute_force_optimal_w");
  const std::size_t m = values.size();
  const double total_ss = detail::centered_sum_of_squares(values);

  // The last element is pinned to the second cluster so each partition is
  // visited once; bit i of `mask` puts element i in the first cluster.
  const std::uint32_t count = 1u << (m - 1);
  double best = total_ss;
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    double s1 = 0.0, s2 = 0.0;
    std::size_t n1 = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1u) {
        s1 += values[i];
        ++n1;
      } else {
        s2 += values[i];
      }
    }
    const double mu1 = s1 / static_cast<double>(n1);
    const double mu2 = s2 / static_cast<double>(m - n1);
    double within = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = values[i] - ((mask >> i & 1u) ? mu1 : mu2);
      within += d * d;
    }
    best = std::min(best, within);
  }
  return best / total_ss;
}

}  // namespace ntarp
