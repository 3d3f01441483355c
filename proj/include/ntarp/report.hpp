#pragma once

// JSON serialization of search results, feature pipelines and calibration.
//
// Candidate report schema ("ntarp.candidates/1"):
//   {
//     "schema": "ntarp.candidates/1",
//     "alpha": <level requested>, "bonferroni": <bool>,
//     "effective_alpha": <alpha, or alpha / n_candidates with bonferroni>,
//     "n_candidates": <int>, "train_rows": <int>, "holdout_rows": <int>,
//     "validate_threshold": "reoptimize" | "fixed",
//     "candidates": [ {
//         "rank": <0-based, ascending train w>, "seed_index": <int>,
//         "direction": [<unit vector>], "threshold": <training threshold | null>,
//         "train_w", "train_p", "validate_w", "validate_p": <number | null>,
//         "verdict": "pending" | "significant" | "rejected",
//         "significant_raw": validate_p <= alpha,
//         "significant_bonferroni": validate_p <= alpha / n_candidates,
//         "train_split", "validate_split": <SplitResult object | null>,
//         "note": <string> } ... ]
//   }

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "features.hpp"
#include "null_model.hpp"
#include "search.hpp"
#include "withinss.hpp"

namespace ntarp {

using json = nlohmann::json;

inline constexpr const char* kCandidatesSchema = "ntarp.candidates/1";
inline constexpr const char* kPipelineSchema = "ntarp.pipeline/1";

inline void to_json(json& j, const SplitResult& s) {
  j = json{{"w", s.w},
           {"explained", s.explained},
           {"threshold", s.threshold},
           {"left_size", s.left_size},
           {"right_size", s.right_size},
           {"mu_left", s.mu_left},
           {"mu_right", s.mu_right},
           {"r_squared", s.r_squared}};
}

inline void from_json(const json& j, SplitResult& s) {
  j.at("w").get_to(s.w);
  j.at("explained").get_to(s.explained);
  j.at("threshold").get_to(s.threshold);
  j.at("left_size").get_to(s.left_size);
  j.at("right_size").get_to(s.right_size);
  j.at("mu_left").get_to(s.mu_left);
  j.at("mu_right").get_to(s.mu_right);
  j.at("r_squared").get_to(s.r_squared);
}

inline Verdict verdict_from_string(const std::string& s) {
  if (s == "pending") return Verdict::pending;
  if (s == "significant") return Verdict::significant;
  if (s == "rejected") return Verdict::rejected;
  throw ParseError("unknown verdict '" + s + "'");
}

inline const char* to_string(ThresholdMode m) {
  return m == ThresholdMode::reoptimize ? "reoptimize" : "fixed";
}

inline ThresholdMode threshold_mode_from_string(const std::string& s) {
  if (s == "reoptimize") return ThresholdMode::reoptimize;
  if (s == "fixed") return ThresholdMode::fixed;
  throw InvalidArgument("unknown threshold mode '" + s + "' (expected reoptimize or fixed)");
}

struct ReportContext {
  double alpha = 0.01;
  bool bonferroni = true;
  std::size_t train_rows = 0;
  std::size_t holdout_rows = 0;
  ThresholdMode mode = ThresholdMode::reoptimize;
};

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

inline json candidate_to_json(const Candidate& c, std::size_t rank, double alpha,
                              double bonferroni_alpha) {
  json j;
  j["rank"] = rank;
  j["seed_index"] = c.direction.seed_index;
  j["direction"] = c.direction.components;
  j["threshold"] = c.train_split ? json(c.train_split->threshold) : json(nullptr);
  j["train_w"] = c.train_split ? json(c.train_split->w) : json(nullptr);
  j["train_p"] = c.train_split ? json(c.train_p) : json(nullptr);
  j["validate_w"] = c.validate_split ? json(c.validate_split->w) : json(nullptr);
  j["validate_p"] = optional_json(c.validate_p);
  j["verdict"] = to_string(c.verdict);
  j["significant_raw"] = c.validate_p && *c.validate_p <= alpha;
  j["significant_bonferroni"] = c.validate_p && *c.validate_p <= bonferroni_alpha;
  j["train_split"] = optional_json(c.train_split);
  j["validate_split"] = optional_json(c.validate_split);
  j["note"] = c.note;
  return j;
}

inline json candidates_report(const std::vector<Candidate>& candidates, const ReportContext& ctx) {
  const double bonferroni_alpha = effective_alpha(ctx.alpha, candidates.size(), true);
  json j;
  j["schema"] = kCandidatesSchema;
  j["alpha"] = ctx.alpha;
  j["bonferroni"] = ctx.bonferroni;
  j["effective_alpha"] = effective_alpha(ctx.alpha, candidates.size(), ctx.bonferroni);
  j["n_candidates"] = candidates.size();
  j["train_rows"] = ctx.train_rows;
  j["holdout_rows"] = ctx.holdout_rows;
  j["validate_threshold"] = to_string(ctx.mode);
  j["candidates"] = json::array();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    j["candidates"].push_back(candidate_to_json(candidates[i], i, ctx.alpha, bonferroni_alpha));
  }
  return j;
}

inline Candidate candidate_from_json(const json& j) {
  Candidate c;
  j.at("direction").get_to(c.direction.components);
  j.at("seed_index").get_to(c.direction.seed_index);
  if (!j.at("train_split").is_null()) c.train_split = j.at("train_split").get<SplitResult>();
  if (!j.at("train_p").is_null()) c.train_p = j.at("train_p").get<double>();
  if (!j.at("validate_split").is_null()) {
    c.validate_split = j.at("validate_split").get<SplitResult>();
  }
  if (!j.at("validate_p").is_null()) c.validate_p = j.at("validate_p").get<double>();
  c.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  c.note = j.value("note", "");
  return c;
}

inline std::vector<Candidate> candidates_from_report(const json& report) {
  if (report.value("schema", "") != kCandidatesSchema) {
    throw ParseError("not a candidate report (schema '" + report.value("schema", "") + "')");
  }
  std::vector<Candidate> out;
  for (const auto& c : report.at("candidates")) out.push_back(candidate_from_json(c));
  return out;
}

// ---------------------------------------------------------------------------
// Feature pipeline

inline void to_json(json& j, const FeatureMap& m) {
  j = json{{"input_dim", m.input_dim},
           {"output_dim", m.output_dim},
           {"degree", m.degree},
           {"terms", m.terms}};
}

inline void from_json(const json& j, FeatureMap& m) {
  j.at("input_dim").get_to(m.input_dim);
  j.at("output_dim").get_to(m.output_dim);
  j.at("degree").get_to(m.degree);
  j.at("terms").get_to(m.terms);
  if (m.terms.size() != m.output_dim) throw ParseError("FeatureMap: terms/output_dim mismatch");
}

inline void to_json(json& j, const ColumnDictionary& d) {
  j = json{{"attribute_count", d.attribute_count}, {"columns", json::array()}};
  for (const auto& c : d.columns) {
    j["columns"].push_back({{"attribute", c.attribute}, {"category", c.category}});
  }
}

inline void from_json(const json& j, ColumnDictionary& d) {
  j.at("attribute_count").get_to(d.attribute_count);
  d.columns.clear();
  for (const auto& c : j.at("columns")) {
    d.columns.push_back({c.at("attribute").get<std::size_t>(), c.at("category").get<std::string>()});
  }
}

inline void to_json(json& j, const Standardization& s) {
  j = json{{"mean", s.mean}, {"scale", s.scale}, {"constant", s.constant}};
}

inline void from_json(const json& j, Standardization& s) {
  j.at("mean").get_to(s.mean);
  j.at("scale").get_to(s.scale);
  j.at("constant").get_to(s.constant);
}

/// Everything needed to map new raw rows into the space the directions live in:
/// optional standardization, monomial extension, optional re-standardization.
struct FeaturePipeline {
  std::optional<Standardization> input_standardization;
  FeatureMap feature_map;
  std::optional<Standardization> output_standardization;
  std::optional<ColumnDictionary> categorical;

  Matrix apply(const Matrix& raw) const {
    Matrix x = input_standardization ? input_standardization->apply(raw) : raw;
    if (feature_map.degree > 1) x = feature_map.apply(x);
    if (output_standardization) x = output_standardization->apply(x);
    return x;
  }
};

inline void to_json(json& j, const FeaturePipeline& p) {
  j = json{{"schema", kPipelineSchema},
           {"input_standardization", optional_json(p.input_standardization)},
           {"feature_map", p.feature_map},
           {"output_standardization", optional_json(p.output_standardization)},
           {"categorical", optional_json(p.categorical)}};
}

inline void from_json(const json& j, FeaturePipeline& p) {
  if (j.value("schema", "") != kPipelineSchema) throw ParseError("not a feature pipeline file");
  if (!j.at("input_standardization").is_null()) {
    p.input_standardization = j.at("input_standardization").get<Standardization>();
  }
  j.at("feature_map").get_to(p.feature_map);
  if (!j.at("output_standardization").is_null()) {
    p.output_standardization = j.at("output_standardization").get<Standardization>();
  }
  if (!j.at("categorical").is_null()) p.categorical = j.at("categorical").get<ColumnDictionary>();
}

// ---------------------------------------------------------------------------
// Calibration

inline void to_json(json& j, const CalibrationResult& c) {
  j = json{{"mean_coeff", c.mean_coeff},     {"mean_exponent", c.mean_exponent},
           {"var_coeff", c.var_coeff},       {"var_exponent", c.var_exponent},
           {"r2_mean", c.r2_mean},           {"r2_var", c.r2_var},
           {"n_min", c.n_min},               {"n_max", c.n_max},
           {"trials_per_n", c.trials_per_n}};
}

}  // namespace ntarp
