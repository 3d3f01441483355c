#pragma once

// Gaussian null distribution of W.
//
// When the projected points are i.i.d. standard normal, W is close to
// Var(|Y|)/Var(Y) and is asymptotically normal with mean sigma2 and variance
// kappa2/n. Small-n corrections give the working model
//   W ~ N(sigma2 - 1/n, kappa2/n - 0.4/n^1.9),   n >= 5,
// and p-values are the lower-tail probability P(W < w) under that model.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "stats.hpp"
#include "withinss.hpp"

namespace ntarp {

// Moments of |Z| for a standard normal Z.
struct NullConstants {
  double mu = std::sqrt(2.0 / std::numbers::pi);             // E|Z|
  double sigma2 = 1.0 - 2.0 / std::numbers::pi;              // Var|Z|
  double kappa2 = 8.0 * (std::numbers::pi - 3.0) /           // Var((|Z|-mu)^2 - sigma2 Z^2)
                  (std::numbers::pi * std::numbers::pi);
};

inline const NullConstants kNullConstants{};

// Smallest sample count the small-n corrections were fitted for.
inline constexpr std::size_t kMinNullSamples = 5;

// Correction terms: mean shift kMeanCorrection / n, variance shift
// kVarianceCorrection / n^kVarianceExponent.
inline constexpr double kMeanCorrection = 1.0;
inline constexpr double kVarianceCorrection = 0.4;
inline constexpr double kVarianceExponent = 1.9;

namespace detail {
inline void require_null_domain(std::size_t n) {
  if (n < kMinNullSamples) {
    throw InvalidArgument("null model is defined for n >= 5 samples, got " + std::to_string(n));
  }
}
}  // namespace detail

inline double null_mean(std::size_t n) {
  detail::require_null_domain(n);
  return kNullConstants.sigma2 - kMeanCorrection / static_cast<double>(n);
}

inline double null_variance(std::size_t n) {
  detail::require_null_domain(n);
  const double nd = static_cast<double>(n);
  return kNullConstants.kappa2 / nd - kVarianceCorrection * std::pow(nd, -kVarianceExponent);
}

/// Corrected Gaussian approximation of the W distribution for n projected points.
class NullModel {
 public:
  explicit NullModel(std::size_t n) : n_(n), mean_(null_mean(n)), variance_(null_variance(n)) {}

  std::size_t n() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }
  double stddev() const noexcept { return std::sqrt(variance_); }

  double z_score(double w) const noexcept { return (w - mean_) / stddev(); }

  // P(W < w) under the null. One-sided: small W means clustered.
  double p_value(double w) const noexcept { return normal_cdf(z_score(w)); }

 private:
  std::size_t n_;
  double mean_;
  double variance_;
};

inline double p_value(double w, std::size_t n) { return NullModel(n).p_value(w); }

/// Population variance of |values| over population variance of values.
inline double half_normal_ratio(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("half_normal_ratio: empty input");
  const double var = population_variance(values);
  if (var == 0.0) throw DegenerateProjection("half_normal_ratio: zero-variance input");
  std::vector<double> abs_values(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) abs_values[i] = std::abs(values[i]);
  return population_variance(abs_values) / var;
}

// Both statistics computed on the same simulated samples.
struct NullDraws {
  std::vector<double> w;
  std::vector<double> half_normal_ratio;
};

namespace detail {

inline void draw_null_sample(std::uint64_t seed, std::uint64_t trial, std::vector<double>& out) {
  Rng rng(seed, trial);
  for (double& x : out) x = rng.normal();
}

}  // namespace detail

/// W of `trials` independent samples of n standard normals. Trial t draws from
/// stream (seed, t), so the output is identical for any worker count.
inline std::vector<double> simulate_null(std::size_t n, std::size_t trials, std::uint64_t seed,
                                         unsigned workers = 0) {
  if (n < 2) throw InvalidArgument("simulate_null: n must be >= 2");
  if (trials < 1) throw InvalidArgument("simulate_null: trials must be >= 1");
  std::vector<double> w(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    thread_local std::vector<double> sample;
    sample.resize(n);
    detail::draw_null_sample(seed, t, sample);
    w[t] = optimal_split(sample).w;
  });
  return w;
}

/// Same draws as simulate_null, also recording Var(|Y|)/Var(Y) per trial.
inline NullDraws simulate_null_detailed(std::size_t n, std::size_t trials, std::uint64_t seed,
                                        unsigned workers = 0) {
  if (n < 2) throw InvalidArgument("simulate_null: n must be >= 2");
  if (trials < 1) throw InvalidArgument("simulate_null: trials must be >= 1");
  NullDraws draws{std::vector<double>(trials), std::vector<double>(trials)};
  parallel_for(trials, workers, [&](std::size_t t) {
    thread_local std::vector<double> sample;
    sample.resize(n);
    detail::draw_null_sample(seed, t, sample);
    draws.w[t] = optimal_split(sample).w;
    draws.half_normal_ratio[t] = half_normal_ratio(sample);
  });
  return draws;
}

struct CalibrationRow {
  std::size_t n = 0;
  double empirical_mean = 0.0;
  double empirical_variance = 0.0;
  double deviation_mean = 0.0;      // sigma2 - empirical_mean
  double deviation_variance = 0.0;  // kappa2 / n - empirical_variance
};

/// Power-law fits deviation_mean ~ mean_coeff / n^mean_exponent and
/// deviation_variance ~ var_coeff / n^var_exponent, from OLS on log-log axes.
struct CalibrationResult {
  double mean_coeff = 0.0;
  double mean_exponent = 0.0;
  double var_coeff = 0.0;
  double var_exponent = 0.0;
  double r2_mean = 0.0;
  double r2_var = 0.0;
  std::size_t n_min = 0;
  std::size_t n_max = 0;
  std::size_t trials_per_n = 0;
  std::vector<CalibrationRow> rows;
};

// Per-n seed so that every n has its own family of trial streams.
inline std::uint64_t calibration_seed(std::uint64_t seed, std::size_t n) {
  return mix_stream(seed, 0x6E756C6C00000000ULL + n);
}

/// Moments of simulated W for every n in [n_min, n_max] (population variance),
/// then unweighted least squares of log deviation against log n.
inline CalibrationResult calibrate(std::size_t n_min, std::size_t n_max, std::size_t trials_per_n,
                                   std::uint64_t seed, unsigned workers = 0) {
  if (n_min < kMinNullSamples) throw InvalidArgument("calibrate: n_min must be >= 5");
  if (n_min >= n_max) throw InvalidArgument("calibrate: need n_min < n_max");
  if (trials_per_n < 2) throw InvalidArgument("calibrate: trials_per_n must be >= 2");

  CalibrationResult result;
  result.n_min = n_min;
  result.n_max = n_max;
  result.trials_per_n = trials_per_n;

  std::vector<double> log_n, log_dev_mean, log_dev_var;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const auto w = simulate_null(n, trials_per_n, calibration_seed(seed, n), workers);
    CalibrationRow row;
    row.n = n;
    row.empirical_mean = mean(w);
    row.empirical_variance = population_variance(w);
    row.deviation_mean = kNullConstants.sigma2 - row.empirical_mean;
    row.deviation_variance = kNullConstants.kappa2 / static_cast<double>(n) - row.empirical_variance;
    result.rows.push_back(row);

    if (!(row.deviation_mean > 0.0)) {
      throw CalibrationError("calibrate: non-positive mean deviation at n = " + std::to_string(n));
    }
    if (!(row.deviation_variance > 0.0)) {
      throw CalibrationError("calibrate: non-positive variance deviation at n = " +
                             std::to_string(n));
    }
    log_n.push_back(std::log(static_cast<double>(n)));
    log_dev_mean.push_back(std::log(row.deviation_mean));
    log_dev_var.push_back(std::log(row.deviation_variance));
  }

  const LinearFit mean_fit = fit_line(log_n, log_dev_mean);
  const LinearFit var_fit = fit_line(log_n, log_dev_var);
  result.mean_coeff = std::exp(mean_fit.intercept);
  result.mean_exponent = -mean_fit.slope;
  result.r2_mean = mean_fit.r_squared;
  result.var_coeff = std::exp(var_fit.intercept);
  result.var_exponent = -var_fit.slope;
  result.r2_var = var_fit.r_squared;
  return result;
}

// Per-n moments table: n,empirical_mean,empirical_variance,deviation_mean,deviation_variance
inline void write_calibration_csv(std::ostream& os, const CalibrationResult& result) {
  const auto old_precision = os.precision(17);
  os << "n,empirical_mean,empirical_variance,deviation_mean,deviation_variance\n";
  for (const auto& row : result.rows) {
    os << row.n << ',' << row.empirical_mean << ',' << row.empirical_variance << ','
       << row.deviation_mean << ',' << row.deviation_variance << '\n';
  }
  os.precision(old_precision);
}

}  // namespace ntarp
