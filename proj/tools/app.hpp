#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// tests can drive it in-process.
//
// Exit codes:
//   0  success (cluster / validate-only: at least one significant candidate)
//   1  I/O or parse error
//   2  invalid configuration
//   3  ran to completion, no significant candidate

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "checksum.hpp"
#include "ntarp/ntarp.hpp"

namespace ntarp::cli {

namespace fs = std::filesystem;

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kInvalidConfig = 2,
  kNoSignificant = 3,
};

// Configuration shared by the subcommands; each uses the fields it needs.
struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string candidates_path;
  std::string pipeline_path;
  std::string categorical_cols;
  std::string drop_cols;
  bool header = false;
  std::string delimiter = ",";
  std::size_t n_candidates = 100;
  unsigned degree = 1;
  double alpha = 0.01;
  double split_ratio = 0.5;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::string out_dir = "ntarp_out";
  std::string bonferroni = "on";
  std::string standardize = "off";
  std::string validate_threshold = "reoptimize";
  // calibrate / null-sim
  std::size_t n_min = 5;
  std::size_t n_max = 99;
  std::size_t n = 50;
  std::size_t trials = 100000;
  std::size_t bins = 80;
  double hist_limit = 5.0;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::vector<std::size_t> parse_index_list(const std::string& text, std::size_t width,
                                                 const char* flag) {
  std::vector<std::size_t> out;
  if (text.empty()) return out;
  if (text == "all") {
    for (std::size_t i = 0; i < width; ++i) out.push_back(i);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    unsigned long value = 0;
    try {
      value = std::stoul(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size()) {
      throw ConfigError(std::string(flag) + ": '" + item + "' is not a column index");
    }
    out.push_back(value);
  }
  return out;
}

// Number of fields on the first non-blank line, needed to expand "all".
inline std::size_t sniff_width(const std::string& path, const CsvOptions& opt) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (ntarp::detail::trim(line).empty()) continue;
    return ntarp::detail::split_record(line, opt, 1).size();
  }
  return 0;
}

inline CsvOptions csv_options(const RunConfig& cfg, const std::string& path) {
  CsvOptions opt;
  opt.header = cfg.header;
  if (cfg.delimiter == "whitespace") {
    opt.whitespace = true;
  } else if (cfg.delimiter == "tab") {
    opt.delimiter = '\t';
  } else if (cfg.delimiter.size() == 1) {
    opt.delimiter = cfg.delimiter[0];
  } else {
    throw ConfigError("--delimiter must be a single character, 'tab' or 'whitespace'");
  }
  const bool needs_width = cfg.categorical_cols == "all" || cfg.drop_cols == "all";
  const std::size_t width = needs_width ? sniff_width(path, opt) : 0;
  opt.categorical = parse_index_list(cfg.categorical_cols, width, "--categorical-cols");
  opt.drop = parse_index_list(cfg.drop_cols, width, "--drop-cols");
  return opt;
}

inline void validate_common(const RunConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("--alpha must be in (0, 1)");
  if (!(cfg.split_ratio > 0.0 && cfg.split_ratio < 1.0)) {
    throw ConfigError("--split-ratio must be in (0, 1)");
  }
  if (cfg.n_candidates < 1) throw ConfigError("--n-projections must be >= 1");
  if (cfg.degree < 1) throw ConfigError("--degree must be >= 1");
}

inline void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

inline std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.imbue(std::locale::classic());
  return out;
}

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline void write_json(const fs::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

inline json config_json(const RunConfig& cfg) {
  json j{{"command", cfg.command},
         {"inputs", cfg.inputs},
         {"seed", cfg.seed},
         {"workers", cfg.workers}};
  if (cfg.command == "cluster" || cfg.command == "validate-only") {
    j["categorical_cols"] = cfg.categorical_cols;
    j["drop_cols"] = cfg.drop_cols;
    j["header"] = cfg.header;
    j["delimiter"] = cfg.delimiter;
    j["n_projections"] = cfg.n_candidates;
    j["degree"] = cfg.degree;
    j["alpha"] = cfg.alpha;
    j["split_ratio"] = cfg.split_ratio;
    j["bonferroni"] = cfg.bonferroni;
    j["standardize"] = cfg.standardize;
    j["validate_threshold"] = cfg.validate_threshold;
    if (cfg.command == "validate-only") {
      j["candidates"] = cfg.candidates_path;
      j["pipeline"] = cfg.pipeline_path;
    }
  } else if (cfg.command == "calibrate") {
    j["n_min"] = cfg.n_min;
    j["n_max"] = cfg.n_max;
    j["trials"] = cfg.trials;
  } else if (cfg.command == "null-sim") {
    j["n"] = cfg.n;
    j["trials"] = cfg.trials;
    j["bins"] = cfg.bins;
    j["hist_limit"] = cfg.hist_limit;
  }
  return j;
}

// Config, version and input checksums: enough to regenerate every output.
// Holds no timestamps or host details; reruns of one config are byte-identical.
inline void write_manifest(const RunConfig& cfg, const std::vector<std::string>& files) {
  json inputs = json::array();
  for (const auto& f : files) inputs.push_back({{"path", f}, {"sha256", sha256_file(f)}});
  json manifest{{"tool", "ntarp"},
                {"version", NTARP_VERSION},
                {"config", config_json(cfg)},
                {"inputs", inputs}};
  write_json(fs::path(cfg.out_dir) / "manifest.json", manifest);
}

inline std::string fmt_double(double v, int precision = 6) {
  std::ostringstream ss;
  ss.imbue(std::locale::classic());
  ss << std::setprecision(precision) << v;
  return ss.str();
}

inline std::size_t count_significant(const std::vector<Candidate>& candidates) {
  std::size_t n = 0;
  for (const auto& c : candidates) n += c.verdict == Verdict::significant;
  return n;
}

inline void write_summary(std::ostream& os, const std::vector<Candidate>& candidates,
                          const ReportContext& ctx, const std::string& source) {
  const double eff = effective_alpha(ctx.alpha, candidates.size(), ctx.bonferroni);
  os << "input: " << source << '\n';
  os << "train rows: " << ctx.train_rows << ", hold-out rows: " << ctx.holdout_rows << '\n';
  os << "candidates: " << candidates.size() << ", alpha: " << fmt_double(ctx.alpha)
     << (ctx.bonferroni ? " (Bonferroni)" : "") << ", per-candidate level: " << fmt_double(eff)
     << ", hold-out split: " << to_string(ctx.mode) << '\n';
  os << "significant: " << count_significant(candidates) << '\n';
  os << "\nrank  seed   train_w   train_p       validate_w  validate_p    verdict\n";
  const std::size_t shown = std::min<std::size_t>(candidates.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& c = candidates[i];
    os << std::left << std::setw(6) << i << std::setw(7) << c.direction.seed_index
       << std::setw(10) << (c.train_split ? fmt_double(c.train_split->w, 5) : "-")
       << std::setw(14) << (c.train_split ? fmt_double(c.train_p, 4) : "-") << std::setw(12)
       << (c.validate_split ? fmt_double(c.validate_split->w, 5) : "-") << std::setw(14)
       << (c.validate_p ? fmt_double(*c.validate_p, 4) : "-") << to_string(c.verdict) << '\n';
  }
  if (candidates.size() > shown) os << "... " << candidates.size() - shown << " more\n";
}

// Loads raw data and builds the feature pipeline (standardize, extend, standardize).
struct PreparedData {
  Dataset raw;
  Matrix features;
  FeaturePipeline pipeline;
};

inline PreparedData prepare(const RunConfig& cfg) {
  const auto& path = cfg.inputs.front();
  PreparedData p;
  p.raw = load_csv(path, csv_options(cfg, path));
  p.pipeline.categorical = p.raw.categorical;
  Matrix x = p.raw.matrix;
  const bool standardize_on = cfg.standardize == "on";
  if (standardize_on) {
    auto s = standardize(x);
    x = std::move(s.data);
    p.pipeline.input_standardization = std::move(s.transform);
  }
  auto extended = monomial_extend(x, cfg.degree);
  x = std::move(extended.data);
  p.pipeline.feature_map = std::move(extended.map);
  if (standardize_on && cfg.degree > 1) {
    auto s = standardize(x);
    x = std::move(s.data);
    p.pipeline.output_standardization = std::move(s.transform);
  }
  p.features = std::move(x);
  return p;
}

inline std::vector<Candidate> validate_all(std::vector<Candidate> candidates, const Matrix& holdout,
                                           const RunConfig& cfg) {
  const double level = effective_alpha(cfg.alpha, candidates.size(), cfg.bonferroni == "on");
  const auto mode = threshold_mode_from_string(cfg.validate_threshold);
  for (auto& c : candidates) c = validate(std::move(c), holdout, level, mode);
  return candidates;
}

}  // namespace detail

inline int cmd_cluster(const RunConfig& cfg, std::ostream& out) {
  detail::validate_common(cfg);
  if (cfg.inputs.empty()) throw ConfigError("--input is required");
  const auto mode = threshold_mode_from_string(cfg.validate_threshold);

  auto prepared = detail::prepare(cfg);
  const auto split = split_train_validate(prepared.features, cfg.split_ratio, cfg.seed);
  auto candidates = ntarp_search(split.train, cfg.n_candidates, cfg.seed, {cfg.workers});
  candidates = detail::validate_all(std::move(candidates), split.holdout, cfg);

  detail::ensure_dir(cfg.out_dir);
  const fs::path dir(cfg.out_dir);
  ReportContext ctx{cfg.alpha, cfg.bonferroni == "on", split.train.rows(), split.holdout.rows(),
                    mode};
  detail::write_json(dir / "candidates.json", candidates_report(candidates, ctx));
  detail::write_json(dir / "pipeline.json", json(prepared.pipeline));

  {
    // One label column per significant candidate, for every input row.
    std::vector<std::size_t> significant;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (candidates[i].verdict == Verdict::significant) significant.push_back(i);
    }
    std::vector<std::vector<int>> labels;
    for (std::size_t i : significant) labels.push_back(assign(prepared.features, candidates[i]));
    auto os = detail::open_out(dir / "labels.csv");
    os << "row";
    for (std::size_t i : significant) os << ",candidate_" << i;
    os << '\n';
    for (std::size_t r = 0; r < prepared.features.rows(); ++r) {
      os << r;
      for (const auto& col : labels) os << ',' << col[r];
      os << '\n';
    }
  }
  {
    auto os = detail::open_out(dir / "summary.txt");
    detail::write_summary(os, candidates, ctx, cfg.inputs.front());
  }
  detail::write_manifest(cfg, cfg.inputs);

  const std::size_t n_sig = detail::count_significant(candidates);
  out << n_sig << " significant candidate(s) of " << candidates.size() << "; outputs in "
      << cfg.out_dir << '\n';
  return n_sig > 0 ? kOk : kNoSignificant;
}

inline int cmd_validate_only(RunConfig cfg, std::ostream& out) {
  detail::validate_common(cfg);
  if (cfg.inputs.empty()) throw ConfigError("--input is required");
  if (cfg.candidates_path.empty()) throw ConfigError("--candidates is required");
  if (cfg.pipeline_path.empty()) {
    cfg.pipeline_path = (fs::path(cfg.candidates_path).parent_path() / "pipeline.json").string();
  }
  const auto mode = threshold_mode_from_string(cfg.validate_threshold);

  const auto pipeline = detail::read_json(cfg.pipeline_path).get<FeaturePipeline>();
  auto candidates = candidates_from_report(detail::read_json(cfg.candidates_path));
  if (candidates.empty()) throw ParseError(cfg.candidates_path + ": no candidates");

  auto opt = detail::csv_options(cfg, cfg.inputs.front());
  opt.dictionary = pipeline.categorical;
  const Dataset holdout_raw = load_csv(cfg.inputs.front(), opt);
  const Matrix holdout = pipeline.apply(holdout_raw.matrix);
  candidates = detail::validate_all(std::move(candidates), holdout, cfg);

  detail::ensure_dir(cfg.out_dir);
  const fs::path dir(cfg.out_dir);
  ReportContext ctx{cfg.alpha, cfg.bonferroni == "on", 0, holdout.rows(), mode};
  detail::write_json(dir / "candidates.json", candidates_report(candidates, ctx));
  {
    auto os = detail::open_out(dir / "summary.txt");
    detail::write_summary(os, candidates, ctx, cfg.inputs.front());
  }
  detail::write_manifest(cfg, {cfg.inputs.front(), cfg.candidates_path, cfg.pipeline_path});

  const std::size_t n_sig = detail::count_significant(candidates);
  out << n_sig << " significant candidate(s) of " << candidates.size() << " on "
      << cfg.inputs.front() << '\n';
  return n_sig > 0 ? kOk : kNoSignificant;
}

inline int cmd_calibrate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.n_min < kMinNullSamples) throw ConfigError("--n-min must be >= 5");
  if (cfg.n_min >= cfg.n_max) throw ConfigError("--n-min must be below --n-max");
  if (cfg.trials < 2) throw ConfigError("--trials must be >= 2");

  const auto result = calibrate(cfg.n_min, cfg.n_max, cfg.trials, cfg.seed, cfg.workers);

  detail::ensure_dir(cfg.out_dir);
  const fs::path dir(cfg.out_dir);
  {
    auto os = detail::open_out(dir / "calibration.csv");
    write_calibration_csv(os, result);
  }
  json fitted = result;
  fitted["reference_model"] = {{"mean_coeff", kMeanCorrection},
                           {"mean_exponent", 1.0},
                           {"var_coeff", kVarianceCorrection},
                           {"var_exponent", kVarianceExponent}};
  detail::write_json(dir / "calibration.json", fitted);
  detail::write_manifest(cfg, {});

  out << "mean deviation     ~ " << detail::fmt_double(result.mean_coeff, 4) << " / n^"
      << detail::fmt_double(result.mean_exponent, 4)
      << "  (r^2 = " << detail::fmt_double(result.r2_mean, 5) << ")\n";
  out << "variance deviation ~ " << detail::fmt_double(result.var_coeff, 4) << " / n^"
      << detail::fmt_double(result.var_exponent, 4)
      << "  (r^2 = " << detail::fmt_double(result.r2_var, 5) << ")\n";
  return kOk;
}

// Standardizations of the simulated statistic, one histogram panel each.
struct NullPanels {
  std::vector<double> half_normal;  // sqrt(n)/kappa * (ratio - sigma2)
  std::vector<double> unadjusted;   // sqrt(n)/kappa * (W - sigma2)
  std::vector<double> centered;     // sqrt(n)/kappa * (W - sigma2 + 1/n)
  std::vector<double> scaled;       // (W - mean(n)) / sqrt(variance(n))
};

inline NullPanels null_panels(const NullDraws& draws, std::size_t n) {
  const NullModel model(n);
  const double nd = static_cast<double>(n);
  const double k = std::sqrt(nd) / std::sqrt(kNullConstants.kappa2);
  const double s2 = kNullConstants.sigma2;
  NullPanels p;
  for (std::size_t t = 0; t < draws.w.size(); ++t) {
    p.half_normal.push_back(k * (draws.half_normal_ratio[t] - s2));
    p.unadjusted.push_back(k * (draws.w[t] - s2));
    p.centered.push_back(k * (draws.w[t] - s2 + 1.0 / nd));
    p.scaled.push_back(model.z_score(draws.w[t]));
  }
  return p;
}

inline int cmd_null_sim(const RunConfig& cfg, std::ostream& out) {
  if (cfg.n < kMinNullSamples) throw ConfigError("--n must be >= 5");
  if (cfg.trials < 1) throw ConfigError("--trials must be >= 1");
  if (cfg.bins < 1) throw ConfigError("--bins must be >= 1");
  if (!(cfg.hist_limit > 0.0)) throw ConfigError("--hist-limit must be positive");

  const auto draws = simulate_null_detailed(cfg.n, cfg.trials, cfg.seed, cfg.workers);
  const auto panels = null_panels(draws, cfg.n);

  detail::ensure_dir(cfg.out_dir);
  const fs::path dir(cfg.out_dir);
  {
    auto os = detail::open_out(dir / "null_samples.csv");
    os << std::setprecision(17) << "trial,w,half_normal_ratio\n";
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      os << t << ',' << draws.w[t] << ',' << draws.half_normal_ratio[t] << '\n';
    }
  }

  const std::pair<const char*, const std::vector<double>*> named[] = {
      {"half_normal", &panels.half_normal},
      {"unadjusted", &panels.unadjusted},
      {"centered", &panels.centered},
      {"scaled", &panels.scaled}};
  json summary{{"n", cfg.n}, {"trials", cfg.trials}, {"panels", json::object()}};
  {
    auto os = detail::open_out(dir / "histogram.csv");
    os << std::setprecision(17) << "panel,bin_lower,bin_upper,count,density\n";
    const double width = 2.0 * cfg.hist_limit / static_cast<double>(cfg.bins);
    for (const auto& [name, values] : named) {
      std::vector<std::size_t> counts(cfg.bins, 0);
      for (double v : *values) {
        const double pos = (v + cfg.hist_limit) / width;
        if (pos >= 0.0 && pos < static_cast<double>(cfg.bins)) ++counts[static_cast<std::size_t>(pos)];
      }
      for (std::size_t b = 0; b < cfg.bins; ++b) {
        const double lo = -cfg.hist_limit + width * static_cast<double>(b);
        os << name << ',' << lo << ',' << lo + width << ',' << counts[b] << ','
           << static_cast<double>(counts[b]) / (static_cast<double>(values->size()) * width) << '\n';
      }
      summary["panels"][name] = {{"mean", mean(*values)},
                                 {"variance", population_variance(*values)},
                                 {"ks_normal", ks_distance_to_normal(*values)}};
    }
  }
  detail::write_json(dir / "null_summary.json", summary);
  detail::write_manifest(cfg, {});

  out << "n = " << cfg.n << ", trials = " << cfg.trials << '\n';
  for (const auto& [name, values] : named) {
    const auto& s = summary["panels"][name];
    out << std::left << std::setw(12) << name << " mean " << std::setw(12)
        << detail::fmt_double(s["mean"].get<double>(), 4) << " var " << std::setw(10)
        << detail::fmt_double(s["variance"].get<double>(), 4) << " KS "
        << detail::fmt_double(s["ks_normal"].get<double>(), 4) << '\n';
  }
  return kOk;
}

inline int cmd_report(const RunConfig& cfg, std::ostream& out) {
  if (cfg.candidates_path.empty()) throw ConfigError("--candidates is required");
  const json report = detail::read_json(cfg.candidates_path);
  const auto candidates = candidates_from_report(report);
  ReportContext ctx;
  ctx.alpha = report.value("alpha", 0.01);
  ctx.bonferroni = report.value("bonferroni", true);
  ctx.train_rows = report.value("train_rows", std::size_t{0});
  ctx.holdout_rows = report.value("holdout_rows", std::size_t{0});
  ctx.mode = threshold_mode_from_string(report.value("validate_threshold", "reoptimize"));
  detail::write_summary(out, candidates, ctx, cfg.candidates_path);
  return kOk;
}

inline void add_data_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--input", cfg.inputs, "Data file (delimited text)")->required();
  sub->add_option("--categorical-cols", cfg.categorical_cols,
                  "0-based columns to one-hot encode, comma separated, or 'all'");
  sub->add_option("--drop-cols", cfg.drop_cols, "0-based columns to ignore (e.g. class labels)");
  sub->add_flag("--header", cfg.header, "First row holds column names");
  sub->add_option("--delimiter", cfg.delimiter, "Field separator: one character, 'tab' or 'whitespace'")
      ->capture_default_str();
  sub->add_option("--degree", cfg.degree, "Monomial extension degree (1 = none)")
      ->capture_default_str();
  sub->add_option("--standardize", cfg.standardize,
                  "Standardize columns before (and after) extension")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  sub->add_option("--alpha", cfg.alpha, "Significance level")->capture_default_str();
  sub->add_option("--bonferroni", cfg.bonferroni, "Test each candidate at alpha / n-projections")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  sub->add_option("--validate-threshold", cfg.validate_threshold,
                  "Split hold-out projections by re-optimizing or at the training threshold")
      ->check(CLI::IsMember({"reoptimize", "fixed"}))
      ->capture_default_str();
  sub->add_option("--out-dir", cfg.out_dir, "Output directory")->capture_default_str();
  sub->add_option("--workers", cfg.workers, "Worker threads (0 = all cores)")->capture_default_str();
}

/// Parses `args` (without the program name) and runs the chosen subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"Random-projection binary clustering with hold-out significance testing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NTARP_VERSION);

  auto* cluster = app.add_subcommand("cluster", "Search random projections and validate splits");
  add_data_flags(cluster, cfg);
  cluster->add_option("--n-projections", cfg.n_candidates, "Random directions to try")
      ->capture_default_str();
  cluster->add_option("--split-ratio", cfg.split_ratio, "Training fraction of the rows")
      ->capture_default_str();
  cluster->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();

  auto* validate_only = app.add_subcommand(
      "validate-only", "Validate saved candidates on new data from the same source");
  add_data_flags(validate_only, cfg);
  validate_only->add_option("--candidates", cfg.candidates_path, "candidates.json from cluster")
      ->required();
  validate_only->add_option("--pipeline", cfg.pipeline_path,
                            "pipeline.json (default: next to --candidates)");

  auto* calib = app.add_subcommand("calibrate", "Refit the small-n null corrections by simulation");
  calib->add_option("--n-min", cfg.n_min)->capture_default_str();
  calib->add_option("--n-max", cfg.n_max)->capture_default_str();
  calib->add_option("--trials", cfg.trials, "Simulated samples per n")->capture_default_str();
  calib->add_option("--seed", cfg.seed)->capture_default_str();
  calib->add_option("--workers", cfg.workers)->capture_default_str();
  calib->add_option("--out-dir", cfg.out_dir)->capture_default_str();

  auto* nullsim = app.add_subcommand("null-sim", "Simulate W under the Gaussian null");
  nullsim->add_option("--n", cfg.n, "Points per sample")->capture_default_str();
  nullsim->add_option("--trials", cfg.trials)->capture_default_str();
  nullsim->add_option("--bins", cfg.bins, "Histogram bins per panel")->capture_default_str();
  nullsim->add_option("--hist-limit", cfg.hist_limit, "Histograms cover [-limit, limit]")
      ->capture_default_str();
  nullsim->add_option("--seed", cfg.seed)->capture_default_str();
  nullsim->add_option("--workers", cfg.workers)->capture_default_str();
  nullsim->add_option("--out-dir", cfg.out_dir)->capture_default_str();

  auto* report = app.add_subcommand("report", "Print a candidate report");
  report->add_option("--candidates", cfg.candidates_path)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInvalidConfig;
  }

  try {
    if (cluster->parsed()) {
      cfg.command = "cluster";
      return cmd_cluster(cfg, out);
    }
    if (validate_only->parsed()) {
      cfg.command = "validate-only";
      return cmd_validate_only(cfg, out);
    }
    if (calib->parsed()) {
      cfg.command = "calibrate";
      return cmd_calibrate(cfg, out);
    }
    if (nullsim->parsed()) {
      cfg.command = "null-sim";
      return cmd_null_sim(cfg, out);
    }
    if (report->parsed()) {
      cfg.command = "report";
      return cmd_report(cfg, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kInvalidConfig;
}

}  // namespace ntarp::cli
