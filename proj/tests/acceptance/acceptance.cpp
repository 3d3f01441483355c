// Acceptance suite: one PASS / FAIL / SKIP line per criterion, nonzero exit if
// any criterion fails. Criterion 8 needs the UCI files; point NTARP_UCI_DIR at
// a directory holding them (see scripts/fetch_uci.sh).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"

namespace fs = std::filesystem;
using namespace ntarp;

namespace {

enum class Status { pass, fail, skip, info };

struct Outcome {
  Status status;
  std::string detail;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream ss;
  ss << std::setprecision(precision) << v;
  return ss.str();
}

Outcome verdict(bool ok, std::string detail) {
  return {ok ? Status::pass : Status::fail, std::move(detail)};
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ntarp_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// 1. Threshold scan against exhaustive partition search.
Outcome oracle_equivalence() {
  Rng rng(20240101);
  double worst = 0.0;
  std::size_t failures = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t m = 2 + rng.below(14);
    std::vector<double> v(m);
    const double scale = std::exp(3.0 * rng.normal());
    const double shift = 4.0 * rng.uniform();
    for (auto& x : v) x = scale * (rng.normal() + (rng.uniform() < 0.4 ? shift : 0.0));
    // Occasional ties.
    if (m > 3 && rng.uniform() < 0.2) v[1] = v[0];
    const double oracle = brute_force_optimal_w(v);
    const double w = optimal_split(v).w;
    const double err = std::abs(w - oracle) / std::max({std::abs(w), std::abs(oracle), 1e-300});
    if (!(std::abs(w - oracle) <= 1e-12 * std::max(std::abs(w), std::abs(oracle)) + 1e-15)) {
      ++failures;
    }
    worst = std::max(worst, oracle == 0.0 && w == 0.0 ? 0.0 : err);
  }
  return verdict(failures == 0, "10000 inputs, m in [2, 15]; max relative error " + fmt(worst, 3) +
                                    ", mismatches " + std::to_string(failures));
}

// 2. Simulated moments against sigma2 - 1/n and kappa2/n - 0.4/n^1.9.
Outcome null_moments() {
  bool ok = true;
  std::string detail;
  for (std::size_t n : {10u, 20u, 50u, 99u}) {
    const std::size_t trials = 100000;
    const auto w = simulate_null(n, trials, 2000 + n, 0);
    const double m = mean(w);
    const double v = population_variance(w);
    const double se = std::sqrt(v / static_cast<double>(trials));
    const double z = (m - null_mean(n)) / se;
    const double rel = v / null_variance(n) - 1.0;
    const bool row_ok = std::abs(z) <= 4.0 && std::abs(rel) <= 0.05;
    ok = ok && row_ok;
    detail += (detail.empty() ? "" : "; ") + std::string("n=") + std::to_string(n) +
              " mean off by " + fmt(z, 3) + " SE, variance off by " + fmt(100.0 * rel, 3) + "%" +
              (row_ok ? "" : " [out of band]");
  }
  return verdict(ok, detail);
}

// 3. Scaled statistic near N(0, 1) at n = 50; 1/n correction reduces bias at n = 5.
Outcome normality() {
  const auto d50 = simulate_null_detailed(50, 100000, 3050, 0);
  const auto p50 = cli::null_panels(d50, 50);
  const double ks = ks_distance_to_normal(p50.scaled);

  const auto d5 = simulate_null_detailed(5, 100000, 3005, 0);
  const auto p5 = cli::null_panels(d5, 5);
  const double bias_raw = mean(p5.unadjusted);
  const double bias_centered = mean(p5.centered);
  const bool ok = ks <= 0.01 && std::abs(bias_centered) < std::abs(bias_raw);
  return verdict(ok, "n=50 KS " + fmt(ks, 3) + " (<= 0.01); n=5 bias " + fmt(bias_raw, 3) +
                         " unadjusted -> " + fmt(bias_centered, 3) + " centered");
}

// 4. `calibrate` with its defaults (n = 5..99, 100000 trials per n).
Outcome calibration() {
  const auto dir = scratch_dir("calibrate");
  std::ostringstream out, err;
  const int code = cli::run({"calibrate", "--seed", "4", "--out-dir", dir.string()}, out, err);
  if (code != 0) return {Status::fail, "calibrate exited " + std::to_string(code) + ": " + err.str()};
  std::ifstream in(dir / "calibration.json");
  const auto j = json::parse(in);
  const double me = j["mean_exponent"], mc = j["mean_coeff"];
  const double ve = j["var_exponent"], vc = j["var_coeff"];
  const double r2m = j["r2_mean"], r2v = j["r2_var"];
  const bool ok = std::abs(me - 1.0) <= 0.1 && std::abs(mc - 1.0) <= 0.2 &&
                  std::abs(ve - 1.9) <= 0.15 && std::abs(vc - 0.4) <= 0.15 && r2m >= 0.99 &&
                  r2v >= 0.99;
  fs::remove_all(dir);
  return verdict(ok, "mean " + fmt(mc) + "/n^" + fmt(me) + " (r2 " + fmt(r2m) + "), variance " +
                         fmt(vc) + "/n^" + fmt(ve) + " (r2 " + fmt(r2v) + ")");
}

// 5. Smallest W among 1e6 null samples of 50 points.
Outcome extreme_order_statistic() {
  const auto w = simulate_null(50, 1000000, 5050, 0);
  const double lo = *std::min_element(w.begin(), w.end());
  return verdict(lo >= 0.12 && lo <= 0.17,
                 "min W over 1000000 samples = " + fmt(lo) + " (band [0.12, 0.17])");
}

// 6. Per-candidate hold-out pass rate on Gaussian data, no multiplicity correction.
Outcome false_positive_rate() {
  const std::size_t datasets = 200, per_dataset = 50;
  const double alphas[] = {0.05, 0.01};
  std::size_t passes[2] = {0, 0}, total = 0;
  for (std::size_t i = 0; i < datasets; ++i) {
    const auto data = generate_gaussian(200, 100, 6000 + i);
    const auto split = split_train_validate(data.matrix, 0.5, i);
    const auto candidates = ntarp_search(split.train, per_dataset, i);
    for (const auto& c : candidates) {
      const auto checked = validate(c, split.holdout, alphas[0]);
      ++total;
      if (!checked.validate_p) continue;
      for (int a = 0; a < 2; ++a) passes[a] += *checked.validate_p <= alphas[a];
    }
  }
  bool ok = true;
  std::string detail = std::to_string(total) + " evaluations";
  for (int a = 0; a < 2; ++a) {
    const double rate = static_cast<double>(passes[a]) / static_cast<double>(total);
    const double se = std::sqrt(alphas[a] * (1.0 - alphas[a]) / static_cast<double>(total));
    const double z = (rate - alphas[a]) / se;
    ok = ok && std::abs(z) <= 3.0;
    detail += "; alpha " + fmt(alphas[a]) + ": rate " + fmt(rate) + " (" + fmt(z, 3) + " SE)";
  }
  return verdict(ok, detail);
}

// 7. `cluster` with defaults on two blobs at +-5 e1, d = 10, m = 100.
Outcome positive_control() {
  const auto dir = scratch_dir("blobs");
  std::size_t successes = 0, exit_zero = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto blobs = generate_two_blobs(100, 10, 5.0, 7000 + seed);
    const auto input = dir / "blobs.csv";
    {
      std::ofstream os(input);
      write_csv(os, blobs);
    }
    const auto out_dir = dir / "out";
    std::ostringstream out, err;
    const int code = cli::run({"cluster", "--input", input.string(), "--header", "--seed",
                               std::to_string(seed), "--out-dir", out_dir.string()},
                              out, err);
    if (code != 0) continue;
    ++exit_zero;
    // First label column = best-ranked significant candidate. Even rows are
    // the blob at -5 e1.
    std::ifstream labels(out_dir / "labels.csv");
    std::string line;
    std::getline(labels, line);
    std::size_t rows = 0, agree = 0;
    while (std::getline(labels, line)) {
      const auto a = line.find(',');
      const auto b = line.find(',', a + 1);
      const int label = std::stoi(line.substr(a + 1, b - a - 1));
      agree += (label == 1) == (rows % 2 == 0);
      ++rows;
    }
    const double agreement = static_cast<double>(std::max(agree, rows - agree)) / rows;
    successes += agreement >= 0.95;
  }
  fs::remove_all(dir);
  return verdict(successes >= 95, std::to_string(successes) + "/100 seeds recover the blobs (" +
                                      std::to_string(exit_zero) + " exited 0)");
}

// 8. Loader dimensionalities on the UCI files, when present.
Outcome dataset_shapes() {
  const char* root = std::getenv("NTARP_UCI_DIR");
  if (root == nullptr || !fs::is_directory(root)) {
    return {Status::skip, "set NTARP_UCI_DIR to a directory with the mfeat, libras and mushroom files"};
  }
  struct Check {
    std::string file;
    CsvOptions options;
    std::size_t rows;  // 0 = not checked
    std::size_t dims;
  };
  CsvOptions mfeat;
  mfeat.whitespace = true;
  CsvOptions libras;
  libras.drop = {90};
  CsvOptions mushroom;
  for (std::size_t c = 0; c < 23; ++c) mushroom.categorical.push_back(c);
  const std::vector<Check> checks{
      {"mfeat-fou", mfeat, 2000, 76},          {"mfeat-fac", mfeat, 2000, 216},
      {"mfeat-kar", mfeat, 2000, 64},          {"mfeat-pix", mfeat, 2000, 240},
      {"mfeat-zer", mfeat, 2000, 47},          {"mfeat-mor", mfeat, 2000, 6},
      {"movement_libras.data", libras, 360, 90}, {"agaricus-lepiota.data", mushroom, 0, 119}};
  bool ok = true;
  std::string detail;
  for (const auto& check : checks) {
    const auto path = fs::path(root) / check.file;
    std::string got;
    bool row_ok = false;
    if (!fs::exists(path)) {
      got = "missing";
    } else {
      try {
        const auto ds = load_csv(path.string(), check.options);
        got = std::to_string(ds.rows()) + "x" + std::to_string(ds.dims());
        row_ok = ds.dims() == check.dims && (check.rows == 0 || ds.rows() == check.rows);
      } catch (const std::exception& e) {
        got = std::string("error: ") + e.what();
      }
    }
    ok = ok && row_ok;
    detail += (detail.empty() ? "" : "; ") + check.file + " " + got;
  }
  return verdict(ok, detail);
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence", oracle_equivalence},
      {2, "null-model moments", null_moments},
      {3, "normality of scaled W", normality},
      {4, "calibration reproduction", calibration},
      {5, "extreme order statistic", extreme_order_statistic},
      {6, "false-positive control", false_positive_rate},
      {7, "positive control", positive_control},
      {8, "dataset shapes", dataset_shapes},
      {9, "scope", [] {
         return Outcome{Status::info,
                        "experimental curves over n, sample size and competing methods are not "
                        "reproduced; criteria 6 and 7 stand in for them"};
       }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Status::fail, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* tag = o.status == Status::pass   ? "PASS"
                      : o.status == Status::fail ? "FAIL"
                      : o.status == Status::skip ? "SKIP"
                                                 : "INFO";
    failed += o.status == Status::fail;
    std::cout << tag << "  [" << c.id << "] " << c.name << ": " << o.detail << " (" << fmt(secs, 3)
              << " s)" << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria met" : std::to_string(failed) + " criterion(s) failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
