// brandpulse: weekly forum features and their relation to a price series.
//
// Exit codes: 0 success, 1 config error, 2 data error, 3 analysis error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "acceptance/criteria.hpp"
#include "brandpulse/error.hpp"
#include "brandpulse/pipeline/config.hpp"
#include "brandpulse/pipeline/run.hpp"

namespace fs = std::filesystem;
using namespace brandpulse;
using pipeline::PipelineConfig;

namespace {

enum Exit { kOk = 0, kConfig = 1, kData = 2, kAnalysis = 3 };

// Flags that override config-file fields. Unset flags leave the file value.
struct Overrides {
  std::optional<std::string> messages, messages_format, price, control, lexicon, stopwords, dictionary, precomputed;
  std::optional<std::string> horizon_start, language, focal_word, betweenness_mode, output_dir;
  std::optional<int> horizon_weeks;
  std::optional<std::size_t> window_size, samples;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<bool> stem, keep_digits, export_graphs;

  void attach(CLI::App* app) {
    app->add_option("--messages", messages, "Message file (.jsonl or .csv)");
    app->add_option("--messages-format", messages_format, "auto, jsonl or csv");
    app->add_option("--price", price, "Weekly price series (week,value or date,value)");
    app->add_option("--control", control, "Weekly control index series");
    app->add_option("--lexicon", lexicon, "Sentiment lexicon CSV (word,polarity)");
    app->add_option("--stopwords", stopwords, "Stopword file, one word per line");
    app->add_option("--dictionary", dictionary, "Dictionary file; tokens outside it are dropped");
    app->add_option("--precomputed-sentiment", precomputed, "Per-message scores CSV (message_id,score)");
    app->add_option("--horizon-start", horizon_start, "First window start, RFC 3339");
    app->add_option("--horizon-weeks", horizon_weeks, "Number of weekly windows");
    app->add_option("--language", language, "Stopword/stemmer language (it, en)");
    app->add_option("--window-size", window_size, "Co-occurrence distance");
    app->add_option("--stem", stem, "Stem tokens (true/false)");
    app->add_option("--keep-digits", keep_digits, "Keep digit-only tokens (true/false)");
    app->add_option("--focal-word", focal_word, "Word-network node used for focal centralities");
    app->add_option("--betweenness-mode", betweenness_mode, "exact or sampled")
        ->check(CLI::IsMember({"exact", "sampled"}));
    app->add_option("--samples", samples, "Source samples in sampled mode");
    app->add_option("--seed", seed, "Random seed");
    app->add_option("--workers", workers, "Windows processed concurrently");
    app->add_option("--export-graphs", export_graphs, "Write per-week edge lists (true/false)");
    app->add_option("--output-dir", output_dir, "Output directory");
  }

  void apply(PipelineConfig& c) const {
    auto path = [](const std::optional<std::string>& v, std::string& dst) {
      if (v) dst = v->empty() ? std::string() : fs::absolute(*v).lexically_normal().string();
    };
    path(messages, c.messages);
    path(price, c.price);
    path(control, c.control);
    path(lexicon, c.lexicon);
    path(stopwords, c.stopwords);
    path(dictionary, c.dictionary);
    path(precomputed, c.precomputed_sentiment);
    path(output_dir, c.output_dir);
    if (messages_format) c.messages_format = *messages_format;
    if (horizon_start) c.horizon_start = *horizon_start;
    if (horizon_weeks) c.horizon_weeks = *horizon_weeks;
    if (language) c.language = *language;
    if (window_size) c.window_size = *window_size;
    if (stem) c.stem = *stem;
    if (keep_digits) c.keep_digits = *keep_digits;
    if (focal_word) c.focal_word = *focal_word;
    if (betweenness_mode) c.betweenness_mode = pipeline::parse_betweenness_mode(*betweenness_mode);
    if (samples) c.samples = *samples;
    if (seed) c.seed = *seed;
    if (workers) c.workers = *workers;
    if (export_graphs) c.export_graphs = *export_graphs;
  }
};

PipelineConfig effective_config(const std::string& config_path, const Overrides& o) {
  PipelineConfig c;
  fs::path base = fs::current_path();
  if (!config_path.empty()) {
    c = pipeline::load_config(config_path);
    base = fs::absolute(config_path).parent_path();
  }
  pipeline::resolve_paths(c, base);
  o.apply(c);
  pipeline::validate(c);
  return c;
}

int run_selftest(std::uint64_t seed) {
  acceptance::CriteriaOptions opts;
  opts.seed = seed;
  opts.scratch = fs::temp_directory_path() / ("brandpulse_selftest_" + std::to_string(seed));
  fs::create_directories(opts.scratch);
  int failed = 0;
  acceptance::run_criteria(opts, [&](const acceptance::CriterionResult& r) {
    std::cout << acceptance::format_line(r) << std::endl;
    failed += !r.pass;
  });
  fs::remove_all(opts.scratch);
  std::cout << (11 - failed) << " of 11 checks passed" << std::endl;
  return failed == 0 ? kOk : kAnalysis;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weekly interaction/word-network features and price analysis"};
  app.require_subcommand(1);
  std::string config_path;
  Overrides overrides;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "YAML config file")->check(CLI::ExistingFile);
    overrides.attach(sub);
  };

  auto* ingest = app.add_subcommand("ingest-check", "Parse inputs and report counts without writing outputs");
  add_common(ingest);
  auto* features = app.add_subcommand("features", "Extract weekly features and graph exports");
  add_common(features);
  auto* analyze = app.add_subcommand("analyze", "Run correlations, Granger tests and regressions");
  add_common(analyze);
  std::string features_path;
  analyze->add_option("--features", features_path, "Feature table (default <output_dir>/features.csv)");
  auto* run = app.add_subcommand("run", "features followed by analyze");
  add_common(run);
  bool dry_run = false;
  run->add_flag("--dry-run", dry_run, "Validate config and inputs only");
  auto* selftest = app.add_subcommand("selftest", "Run the oracle checks on generated fixtures");
  std::uint64_t selftest_seed = 42;
  selftest->add_option("--seed", selftest_seed, "Seed for generated fixtures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (selftest->parsed()) return run_selftest(selftest_seed);

    const PipelineConfig cfg = effective_config(config_path, overrides);
    if (ingest->parsed()) {
      std::cout << pipeline::ingest_check(cfg).dump(2) << std::endl;
    } else if (features->parsed()) {
      const auto stage = pipeline::features_with_manifest(cfg);
      std::cout << "features: " << stage.rows.size() << " weeks, " << stage.messages << " messages, "
                << stage.rejected << " rejected, " << stage.dropped << " outside the horizon -> " << cfg.output_dir
                << std::endl;
    } else if (analyze->parsed()) {
      const auto stage = pipeline::analyze_from_file(cfg, features_path);
      std::cout << "analysis written to " << cfg.output_dir << std::endl;
      if (stage.report.incremental_adj_r2) {
        std::cout << "incremental adjusted R^2 (" << cfg.analysis.combined_model << " over "
                  << cfg.analysis.baseline_model << "): " << *stage.report.incremental_adj_r2 << std::endl;
      }
    } else if (run->parsed()) {
      if (dry_run) {
        pipeline::check_inputs(cfg, true, true);
        std::cout << "config ok\n" << pipeline::to_yaml(cfg);
        return kOk;
      }
      const auto result = pipeline::run_all(cfg);
      std::cout << "run: " << result.features.rows.size() << " weeks -> " << cfg.output_dir << std::endl;
      if (result.analysis.report.incremental_adj_r2) {
        std::cout << "incremental adjusted R^2 (" << cfg.analysis.combined_model << " over "
                  << cfg.analysis.baseline_model << "): " << *result.analysis.report.incremental_adj_r2
                  << std::endl;
      }
    }
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return kConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << std::endl;
    return kData;
  } catch (const AnalysisError& e) {
    std::cerr << "analysis error: " << e.what() << std::endl;
    return kAnalysis;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << std::endl;
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "analysis error: " << e.what() << std::endl;
    return kAnalysis;
  }
}
