#pragma once

// Pipeline stages: ingest check, analysis of a feature table, and the full
// features + analysis run with manifests.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "brandpulse/corpus.hpp"
#include "brandpulse/econometrics/battery.hpp"
#include "brandpulse/econometrics/panel.hpp"
#include "brandpulse/error.hpp"
#include "brandpulse/pipeline/config.hpp"
#include "brandpulse/pipeline/features.hpp"
#include "brandpulse/pipeline/manifest.hpp"

namespace brandpulse::pipeline {

inline std::string config_hash(const PipelineConfig& c) { return sha256_hex(to_yaml(c)); }

/// Parses inputs without writing anything and summarises what was found.
inline nlohmann::ordered_json ingest_check(const PipelineConfig& c) {
  check_inputs(c, true, false);
  const LoadedMessages loaded = load_config_messages(c);
  const WeekGrid grid = c.grid();
  const WindowedCorpus corpus = partition_weeks(loaded.messages, grid.start, grid.weeks);
  const ParentIndex parents(loaded.messages);
  std::size_t comments = 0, dangling = 0;
  for (const auto& m : loaded.messages) {
    if (!m.parent_id) continue;
    ++comments;
    if (!parents.resolve(m)) ++dangling;
  }
  std::size_t empty_weeks = 0;
  for (const auto& w : corpus.messages_by_window) empty_weeks += w.empty();

  nlohmann::ordered_json j;
  j["messages"] = loaded.messages.size();
  j["rejected"] = loaded.rejections.size();
  j["assigned"] = corpus.assigned();
  j["dropped_out_of_horizon"] = corpus.dropped;
  j["comments"] = comments;
  j["dangling_parents"] = dangling;
  j["weeks"] = grid.weeks;
  j["empty_weeks"] = empty_weeks;
  auto rej = nlohmann::ordered_json::array();
  for (const auto& r : loaded.rejections) rej.push_back({{"line", r.line}, {"reason", r.reason}});
  j["rejections"] = rej;
  for (const auto& [role, path] : std::vector<std::pair<const char*, std::string>>{{"price", c.price},
                                                                                    {"control", c.control}}) {
    if (path.empty()) continue;
    const auto series = load_market_series(path, role, grid);
    j[role] = {{"observations", series.values.size()}};
  }
  return j;
}

struct AnalyzeStage {
  econ::AnalysisReport report;
  std::vector<std::string> outputs;
};

inline econ::FeaturePanel load_panel(const PipelineConfig& c, const std::vector<WeekFeatures>& features) {
  const WeekGrid grid = c.grid();
  if (features.size() != static_cast<std::size_t>(grid.weeks)) {
    throw DataError("feature table has " + std::to_string(features.size()) + " weeks but the horizon has " +
                    std::to_string(grid.weeks));
  }
  const auto price = load_market_series(c.price, "price", grid);
  const auto control = load_market_series(c.control, "control_index", grid);
  return econ::build_panel(features, price, control);
}

/// Runs the analysis battery on a feature table and writes the report
/// tables. Fails with AnalysisError only when no cell of any table could be
/// computed.
inline AnalyzeStage run_analyze(const PipelineConfig& c, const std::vector<WeekFeatures>& features) {
  check_inputs(c, false, true);
  const std::filesystem::path out_dir = c.output_dir;
  const econ::FeaturePanel panel = load_panel(c, features);
  AnalyzeStage stage;
  stage.report = econ::run_battery(panel, c.analysis);

  bool any_ok = false;
  for (const auto& x : stage.report.correlations) any_ok = any_ok || x.result.has_value();
  for (const auto& x : stage.report.granger) any_ok = any_ok || x.result.has_value();
  for (const auto& x : stage.report.models) any_ok = any_ok || x.result.has_value();
  if (!any_ok) throw AnalysisError("no correlation, Granger or regression cell could be computed");

  const std::pair<const char*, std::string> files[] = {
      {"correlations.csv", econ::correlations_csv(stage.report)},
      {"granger.csv", econ::granger_csv(stage.report)},
      {"regressions.csv", econ::regressions_csv(stage.report)},
      {"models.csv", econ::models_csv(stage.report)},
      {"summary.md", econ::summary_markdown(stage.report, c.analysis)},
  };
  for (const auto& [name, text] : files) {
    write_text_file(out_dir / name, text);
    stage.outputs.emplace_back(name);
  }
  return stage;
}

/// `analyze` subcommand: reads the feature table (default
/// <output_dir>/features.csv) and writes reports plus manifest.json.
inline AnalyzeStage analyze_from_file(const PipelineConfig& c, std::string features_path = {}) {
  if (features_path.empty()) features_path = (std::filesystem::path(c.output_dir) / "features.csv").string();
  if (!std::filesystem::exists(features_path)) throw ConfigError("feature table not found: " + features_path);
  AnalyzeStage stage = run_analyze(c, read_features_csv(features_path));
  Manifest m;
  m.stage = "analyze";
  m.config_sha256 = config_hash(c);
  m.inputs = input_roles(c);
  m.inputs.emplace_back("features", features_path);
  m.outputs = stage.outputs;
  write_manifest(m, c.output_dir, "manifest.json");
  return stage;
}

/// `features` subcommand: feature stage plus its manifest.
inline FeatureStage features_with_manifest(const PipelineConfig& c) {
  FeatureStage stage = run_features(c);
  Manifest m;
  m.stage = "features";
  m.config_sha256 = config_hash(c);
  m.inputs = input_roles(c);
  m.outputs = stage.outputs;
  write_manifest(m, c.output_dir, "manifest.json");
  return stage;
}

struct RunResult {
  FeatureStage features;
  AnalyzeStage analysis;
};

inline const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const DataError*>(&e)) return "data";
  return "analysis";
}

/// Features then analysis. On failure the outputs of completed stages stay
/// in place and error_manifest.json records what failed; the error is
/// rethrown.
inline RunResult run_all(const PipelineConfig& c) {
  const std::filesystem::path out_dir = c.output_dir;
  check_inputs(c, true, true);
  Manifest m;
  m.stage = "run";
  m.config_sha256 = config_hash(c);
  m.inputs = input_roles(c);
  RunResult result;
  try {
    result.features = run_features(c);
    m.outputs = result.features.outputs;
    result.analysis = run_analyze(c, result.features.rows);
    m.outputs.insert(m.outputs.end(), result.analysis.outputs.begin(), result.analysis.outputs.end());
  } catch (const std::exception& e) {
    m.error = e.what();
    m.error_kind = error_kind(e);
    try {
      write_manifest(m, out_dir, "error_manifest.json");
    } catch (...) {
    }
    throw;
  }
  std::filesystem::remove(out_dir / "error_manifest.json");
  write_manifest(m, out_dir, "manifest.json");
  return result;
}

}  // namespace brandpulse::pipeline
