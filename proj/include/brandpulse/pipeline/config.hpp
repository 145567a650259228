#pragma once

// Pipeline configuration, read from and written to YAML.
//
//   inputs:      messages, messages_format (auto|jsonl|csv), price, control,
//                lexicon, stopwords, dictionary, precomputed_sentiment
//   horizon:     start (RFC 3339), weeks
//   text:        language, window_size, stem, keep_digits
//   focal_word:  word-network node whose centralities become predictors
//   betweenness: mode (exact|sampled), samples, seed
//   workers, export_graphs, output_dir
//   analysis:    correlation_lags, granger_max_lag, difference_price,
//                granger_conditioning, baseline_model, combined_model,
//                models: [{name, terms: [{column, lag}]}]
//
// Relative input paths are resolved against the config file's directory.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "brandpulse/corpus.hpp"
#include "brandpulse/econometrics/battery.hpp"
#include "brandpulse/econometrics/panel.hpp"
#include "brandpulse/error.hpp"

namespace brandpulse::pipeline {

enum class BetweennessMode { exact, sampled };

struct PipelineConfig {
  // inputs
  std::string messages;
  std::string messages_format = "auto";
  std::string price;
  std::string control;
  std::string lexicon;     // empty: built-in lexicon
  std::string stopwords;   // empty: built-in list for `language`
  std::string dictionary;  // empty: no dictionary filter
  std::string precomputed_sentiment;  // non-empty: use instead of the lexicon

  // horizon
  std::string horizon_start;
  int horizon_weeks = 94;

  // text
  std::string language = "it";
  std::size_t window_size = 7;
  bool stem = false;
  bool keep_digits = false;

  std::string focal_word;

  BetweennessMode betweenness_mode = BetweennessMode::exact;
  std::size_t samples = 256;
  std::uint64_t seed = 42;

  unsigned workers = 1;
  bool export_graphs = true;
  std::string output_dir = "out";

  econ::BatteryConfig analysis;

  bool operator==(const PipelineConfig&) const = default;

  Timestamp start_instant() const {
    auto t = parse_timestamp(horizon_start);
    if (!t) throw ConfigError("horizon.start is not an RFC 3339 instant: '" + horizon_start + "'");
    return *t;
  }

  WeekGrid grid() const { return {start_instant(), horizon_weeks}; }
};

inline const char* to_string(BetweennessMode m) { return m == BetweennessMode::exact ? "exact" : "sampled"; }

inline BetweennessMode parse_betweenness_mode(const std::string& s) {
  if (s == "exact") return BetweennessMode::exact;
  if (s == "sampled") return BetweennessMode::sampled;
  throw ConfigError("betweenness mode must be 'exact' or 'sampled', got '" + s + "'");
}

namespace detail {

inline void check_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!node) return;
  if (!node.IsMap()) throw ConfigError("'" + where + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown config key '" + (where.empty() ? key : where + "." + key) + "'");
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& out) {
  if (!node || !node[key]) return;
  try {
    out = node[key].as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace detail

inline void validate(const PipelineConfig& c) {
  if (c.horizon_weeks < 1) throw ConfigError("horizon.weeks must be >= 1");
  if (c.window_size < 1) throw ConfigError("text.window_size must be >= 1");
  if (c.samples < 1) throw ConfigError("betweenness.samples must be >= 1");
  if (c.messages_format != "auto" && c.messages_format != "jsonl" && c.messages_format != "csv") {
    throw ConfigError("inputs.messages_format must be auto, jsonl or csv");
  }
  if (!c.horizon_start.empty()) (void)c.start_instant();
  if (c.analysis.granger_max_lag < 1) throw ConfigError("analysis.granger_max_lag must be >= 1");
  std::set<std::string> known;
  for (const auto& p : econ::kPredictors) known.emplace(p.column);
  std::set<std::string> names;
  for (const auto& m : c.analysis.models) {
    if (m.name.empty()) throw ConfigError("every model needs a name");
    if (!names.insert(m.name).second) throw ConfigError("duplicate model name '" + m.name + "'");
    if (m.terms.empty()) throw ConfigError("model '" + m.name + "' has no terms");
    for (const auto& t : m.terms) {
      if (!known.contains(t.column)) throw ConfigError("model '" + m.name + "' uses unknown column '" + t.column + "'");
    }
  }
  for (const auto& col : c.analysis.granger_conditioning) {
    if (!known.contains(col)) throw ConfigError("unknown Granger conditioning column '" + col + "'");
  }
}

inline PipelineConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("invalid YAML: ") + e.what());
  }
  PipelineConfig c;
  if (!root || root.IsNull()) return c;
  detail::check_keys(root, "",
                     {"inputs", "horizon", "text", "focal_word", "betweenness", "workers", "export_graphs",
                      "output_dir", "analysis"});

  const auto in = root["inputs"];
  detail::check_keys(in, "inputs",
                     {"messages", "messages_format", "price", "control", "lexicon", "stopwords", "dictionary",
                      "precomputed_sentiment"});
  detail::read(in, "messages", c.messages);
  detail::read(in, "messages_format", c.messages_format);
  detail::read(in, "price", c.price);
  detail::read(in, "control", c.control);
  detail::read(in, "lexicon", c.lexicon);
  detail::read(in, "stopwords", c.stopwords);
  detail::read(in, "dictionary", c.dictionary);
  detail::read(in, "precomputed_sentiment", c.precomputed_sentiment);

  const auto hz = root["horizon"];
  detail::check_keys(hz, "horizon", {"start", "weeks"});
  detail::read(hz, "start", c.horizon_start);
  detail::read(hz, "weeks", c.horizon_weeks);

  const auto tx = root["text"];
  detail::check_keys(tx, "text", {"language", "window_size", "stem", "keep_digits"});
  detail::read(tx, "language", c.language);
  detail::read(tx, "window_size", c.window_size);
  detail::read(tx, "stem", c.stem);
  detail::read(tx, "keep_digits", c.keep_digits);

  detail::read(root, "focal_word", c.focal_word);

  const auto bw = root["betweenness"];
  detail::check_keys(bw, "betweenness", {"mode", "samples", "seed"});
  std::string mode = to_string(c.betweenness_mode);
  detail::read(bw, "mode", mode);
  c.betweenness_mode = parse_betweenness_mode(mode);
  detail::read(bw, "samples", c.samples);
  detail::read(bw, "seed", c.seed);

  detail::read(root, "workers", c.workers);
  detail::read(root, "export_graphs", c.export_graphs);
  detail::read(root, "output_dir", c.output_dir);

  const auto an = root["analysis"];
  detail::check_keys(an, "analysis",
                     {"correlation_lags", "granger_max_lag", "difference_price", "granger_conditioning",
                      "baseline_model", "combined_model", "models"});
  detail::read(an, "correlation_lags", c.analysis.correlation_lags);
  detail::read(an, "granger_max_lag", c.analysis.granger_max_lag);
  detail::read(an, "difference_price", c.analysis.difference_price);
  detail::read(an, "granger_conditioning", c.analysis.granger_conditioning);
  detail::read(an, "baseline_model", c.analysis.baseline_model);
  detail::read(an, "combined_model", c.analysis.combined_model);
  if (an && an["models"]) {
    if (!an["models"].IsSequence()) throw ConfigError("analysis.models must be a list");
    c.analysis.models.clear();
    for (const auto& m : an["models"]) {
      detail::check_keys(m, "analysis.models[]", {"name", "terms"});
      econ::ModelSpec spec;
      detail::read(m, "name", spec.name);
      if (m["terms"]) {
        if (!m["terms"].IsSequence()) throw ConfigError("model terms must be a list");
        for (const auto& t : m["terms"]) {
          detail::check_keys(t, "analysis.models[].terms[]", {"column", "lag"});
          econ::ModelTerm term;
          detail::read(t, "column", term.column);
          detail::read(t, "lag", term.lag);
          spec.terms.push_back(term);
        }
      }
      c.analysis.models.push_back(std::move(spec));
    }
  }
  validate(c);
  return c;
}

inline std::string to_yaml(const PipelineConfig& c) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  e << YAML::Key << "inputs" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "messages" << YAML::Value << c.messages;
  e << YAML::Key << "messages_format" << YAML::Value << c.messages_format;
  e << YAML::Key << "price" << YAML::Value << c.price;
  e << YAML::Key << "control" << YAML::Value << c.control;
  e << YAML::Key << "lexicon" << YAML::Value << c.lexicon;
  e << YAML::Key << "stopwords" << YAML::Value << c.stopwords;
  e << YAML::Key << "dictionary" << YAML::Value << c.dictionary;
  e << YAML::Key << "precomputed_sentiment" << YAML::Value << c.precomputed_sentiment;
  e << YAML::EndMap;
  e << YAML::Key << "horizon" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "start" << YAML::Value << c.horizon_start;
  e << YAML::Key << "weeks" << YAML::Value << c.horizon_weeks;
  e << YAML::EndMap;
  e << YAML::Key << "text" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "language" << YAML::Value << c.language;
  e << YAML::Key << "window_size" << YAML::Value << c.window_size;
  e << YAML::Key << "stem" << YAML::Value << c.stem;
  e << YAML::Key << "keep_digits" << YAML::Value << c.keep_digits;
  e << YAML::EndMap;
  e << YAML::Key << "focal_word" << YAML::Value << c.focal_word;
  e << YAML::Key << "betweenness" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "mode" << YAML::Value << to_string(c.betweenness_mode);
  e << YAML::Key << "samples" << YAML::Value << c.samples;
  e << YAML::Key << "seed" << YAML::Value << c.seed;
  e << YAML::EndMap;
  e << YAML::Key << "workers" << YAML::Value << c.workers;
  e << YAML::Key << "export_graphs" << YAML::Value << c.export_graphs;
  e << YAML::Key << "output_dir" << YAML::Value << c.output_dir;
  e << YAML::Key << "analysis" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "correlation_lags" << YAML::Value << YAML::Flow << c.analysis.correlation_lags;
  e << YAML::Key << "granger_max_lag" << YAML::Value << c.analysis.granger_max_lag;
  e << YAML::Key << "difference_price" << YAML::Value << c.analysis.difference_price;
  e << YAML::Key << "granger_conditioning" << YAML::Value << YAML::Flow << c.analysis.granger_conditioning;
  e << YAML::Key << "baseline_model" << YAML::Value << c.analysis.baseline_model;
  e << YAML::Key << "combined_model" << YAML::Value << c.analysis.combined_model;
  e << YAML::Key << "models" << YAML::Value << YAML::BeginSeq;
  for (const auto& m : c.analysis.models) {
    e << YAML::BeginMap << YAML::Key << "name" << YAML::Value << m.name;
    e << YAML::Key << "terms" << YAML::Value << YAML::BeginSeq;
    for (const auto& t : m.terms) {
      e << YAML::Flow << YAML::BeginMap << YAML::Key << "column" << YAML::Value << t.column << YAML::Key << "lag"
        << YAML::Value << t.lag << YAML::EndMap;
    }
    e << YAML::EndSeq << YAML::EndMap;
  }
  e << YAML::EndSeq;
  e << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Makes every non-empty input path (and the output directory) absolute.
inline void resolve_paths(PipelineConfig& c, const std::filesystem::path& base_dir) {
  auto fix = [&](std::string& p) {
    if (p.empty()) return;
    std::filesystem::path fp(p);
    if (fp.is_relative()) fp = base_dir / fp;
    p = fp.lexically_normal().string();
  };
  for (auto* p : {&c.messages, &c.price, &c.control, &c.lexicon, &c.stopwords, &c.dictionary,
                  &c.precomputed_sentiment, &c.output_dir}) {
    fix(*p);
  }
}

/// Checks that the inputs a run needs are named and exist.
inline void check_inputs(const PipelineConfig& c, bool need_messages, bool need_market) {
  auto must_exist = [](const std::string& p, const char* what) {
    if (p.empty()) throw ConfigError(std::string("missing required input: ") + what);
    if (!std::filesystem::exists(p)) throw ConfigError(std::string(what) + " not found: " + p);
  };
  auto may_exist = [](const std::string& p, const char* what) {
    if (!p.empty() && !std::filesystem::exists(p)) throw ConfigError(std::string(what) + " not found: " + p);
  };
  if (c.horizon_start.empty()) throw ConfigError("missing required setting: horizon.start");
  if (need_messages) {
    must_exist(c.messages, "inputs.messages");
    if (c.focal_word.empty()) throw ConfigError("missing required setting: focal_word");
  }
  if (need_market) {
    must_exist(c.price, "inputs.price");
    must_exist(c.control, "inputs.control");
  }
  may_exist(c.lexicon, "inputs.lexicon");
  may_exist(c.stopwords, "inputs.stopwords");
  may_exist(c.dictionary, "inputs.dictionary");
  may_exist(c.precomputed_sentiment, "inputs.precomputed_sentiment");
}

}  // namespace brandpulse::pipeline
