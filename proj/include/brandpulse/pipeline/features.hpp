#pragma once

// Weekly feature extraction: per window, the interaction network and word
// network are built and reduced to the activity, structural and semantic
// measures, then written as one CSV row per week.

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "brandpulse/centrality.hpp"
#include "brandpulse/corpus.hpp"
#include "brandpulse/csv.hpp"
#include "brandpulse/econometrics/panel.hpp"
#include "brandpulse/error.hpp"
#include "brandpulse/graph.hpp"
#include "brandpulse/pipeline/config.hpp"
#include "brandpulse/pipeline/manifest.hpp"
#include "brandpulse/semantics.hpp"
#include "brandpulse/textproc.hpp"

namespace brandpulse::pipeline {

using econ::WeekFeatures;

inline constexpr const char* kFeatureColumns[] = {
    "week",          "window_start",      "activity",  "activity_words", "group_degree", "group_betweenness",
    "focal_degree",  "focal_betweenness", "sentiment", "emotionality",   "complexity",   "focal_absent",
};

struct FeatureOptions {
  TextPipeline text;
  std::size_t window_size = 7;
  std::string focal_token;  // already passed through `text`
  BetweennessMode betweenness_mode = BetweennessMode::exact;
  std::size_t samples = 256;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  bool keep_graphs = false;
};

struct WindowResult {
  WeekFeatures features;
  std::optional<InteractionNetwork> interaction;  // kept when keep_graphs
  std::optional<DirectedWeightedGraph> words;
};

namespace detail {

/// Runs fn(i) for i in [0, count) on up to `workers` threads. If any call
/// throws, the exception from the lowest index is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), count));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Rethrows the current exception with a week prefix, keeping its category.
[[noreturn]] inline void rethrow_with_week(std::size_t week) {
  const std::string prefix = "week " + std::to_string(week) + ": ";
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  } catch (const AnalysisError& e) {
    throw AnalysisError(prefix + e.what());
  } catch (const std::exception& e) {
    throw AnalysisError(prefix + e.what());
  }
}

inline std::optional<double> centralization_or_missing(const CentralityVector& cv) {
  if (cv.graph_n < 3) return std::nullopt;
  return centralization(cv).value;
}

}  // namespace detail

/// The focal word must reduce to exactly one token under the corpus pipeline.
inline std::string resolve_focal_token(const std::string& focal_word, const TextPipeline& text) {
  const TokenList t = text(focal_word);
  if (t.size() != 1) {
    throw ConfigError("focal_word '" + focal_word + "' reduces to " + std::to_string(t.size()) +
                      " tokens under the text pipeline; it must reduce to exactly one");
  }
  return t.front();
}

/// Betweenness of the focal node, exact or sampled. Sampled mode uses
/// min(samples, n) sources, so small graphs are computed exactly.
inline CentralityVector word_betweenness(const DirectedWeightedGraph& g, BetweennessMode mode, std::size_t samples,
                                         std::uint64_t seed) {
  if (mode == BetweennessMode::sampled && g.node_count() > 0) {
    return approx_betweenness(g, std::min(samples, g.node_count()), seed);
  }
  return betweenness_centrality(g);
}

/// Features for every window of `corpus`. `parents` should index the whole
/// corpus so replies to messages in earlier weeks resolve.
inline std::vector<WindowResult> extract_features(const WindowedCorpus& corpus, const ParentIndex& parents,
                                                  const SentimentScorer& scorer, const FeatureOptions& opts) {
  const std::size_t weeks = corpus.windows.size();

  std::vector<std::vector<TokenList>> tokens(weeks);
  detail::parallel_for(weeks, opts.workers, [&](std::size_t w) {
    try {
      tokens[w].reserve(corpus.messages_by_window[w].size());
      for (const auto& m : corpus.messages_by_window[w]) tokens[w].push_back(opts.text(m.body));
    } catch (...) {
      detail::rethrow_with_week(w);
    }
  });

  Vocabulary vocab;
  for (const auto& window : tokens) {
    for (const auto& s : window) vocab.add(s);
  }

  std::vector<WindowResult> out(weeks);
  detail::parallel_for(weeks, opts.workers, [&](std::size_t w) {
    try {
      const auto& messages = corpus.messages_by_window[w];
      WindowResult r;
      WeekFeatures& f = r.features;
      f.week = static_cast<int>(w);
      f.activity = static_cast<double>(activity(messages));

      InteractionNetwork inet = build_interaction_network(messages, parents);
      f.group_degree = detail::centralization_or_missing(degree_centrality(inet.graph));
      f.group_betweenness = detail::centralization_or_missing(betweenness_centrality(inet.graph));

      DirectedWeightedGraph words = build_word_network(tokens[w], opts.window_size);
      f.activity_words = static_cast<double>(activity_words(words));
      if (auto focal = words.find(opts.focal_token)) {
        f.focal_degree = degree_centrality(words).normalized[*focal];
        f.focal_betweenness =
            word_betweenness(words, opts.betweenness_mode, opts.samples, opts.seed + w).normalized[*focal];
      } else {
        f.focal_degree = 0.0;
        f.focal_betweenness = 0.0;
        f.focal_absent = true;
      }

      std::vector<double> scores;
      scores.reserve(messages.size());
      for (const auto& m : messages) scores.push_back(score_message(m, scorer).value());
      f.sentiment = window_sentiment(scores);
      f.emotionality = emotionality(scores);
      f.complexity = complexity(tokens[w], vocab);

      if (opts.keep_graphs) {
        r.interaction = std::move(inet);
        r.words = std::move(words);
      }
      out[w] = std::move(r);
    } catch (...) {
      detail::rethrow_with_week(w);
    }
  });
  return out;
}

inline std::string features_csv(const std::vector<WeekFeatures>& rows, const WeekGrid& grid) {
  std::string out;
  {
    std::vector<std::string> header(std::begin(kFeatureColumns), std::end(kFeatureColumns));
    out = csv::join(header);
  }
  for (const auto& f : rows) {
    out += csv::join({std::to_string(f.week), format_timestamp(grid.window(f.week).start),
                      csv::format_optional(f.activity), csv::format_optional(f.activity_words),
                      csv::format_optional(f.group_degree), csv::format_optional(f.group_betweenness),
                      csv::format_optional(f.focal_degree), csv::format_optional(f.focal_betweenness),
                      csv::format_optional(f.sentiment), csv::format_optional(f.emotionality),
                      csv::format_optional(f.complexity), f.focal_absent ? "1" : "0"});
  }
  return out;
}

/// Reads a feature table written by `features_csv`. Missing columns are
/// named in the error; empty cells become missing values.
inline std::vector<WeekFeatures> parse_features_csv(std::string_view text) {
  const auto records = csv::parse(text);
  if (records.empty()) throw DataError("feature table is empty");
  const csv::Header header(records.front());
  std::vector<std::string> missing;
  std::vector<std::size_t> idx;
  for (const char* c : kFeatureColumns) {
    if (std::string_view(c) == "window_start") continue;
    if (auto i = header.find(c)) {
      idx.push_back(*i);
    } else {
      missing.emplace_back(c);
    }
  }
  if (!missing.empty()) {
    std::string names;
    for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m;
    throw DataError("feature table lacks required columns: " + names);
  }
  std::vector<WeekFeatures> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    auto cell = [&](std::size_t k) -> std::optional<double> {
      const std::size_t c = idx[k];
      if (c >= rec.fields.size() || rec.fields[c].empty()) return std::nullopt;
      auto v = csv::parse_double(rec.fields[c]);
      if (!v) throw DataError("feature table line " + std::to_string(rec.line) + ": bad number '" + rec.fields[c] + "'");
      return v;
    };
    WeekFeatures f;
    const auto week = cell(0);
    if (!week) throw DataError("feature table line " + std::to_string(rec.line) + ": missing week");
    f.week = static_cast<int>(*week);
    f.activity = cell(1);
    f.activity_words = cell(2);
    f.group_degree = cell(3);
    f.group_betweenness = cell(4);
    f.focal_degree = cell(5);
    f.focal_betweenness = cell(6);
    f.sentiment = cell(7);
    f.emotionality = cell(8);
    f.complexity = cell(9);
    f.focal_absent = cell(10).value_or(0.0) != 0.0;
    rows.push_back(f);
  }
  return rows;
}

inline std::vector<WeekFeatures> read_features_csv(const std::string& path) {
  return parse_features_csv(csv::read_file(path));
}

/// Loaded text resources for a config; the pipeline points into them.
struct TextResources {
  std::unique_ptr<StopwordList> stopwords;
  std::unique_ptr<WordSet> dictionary;
  TextPipeline pipeline;
};

inline TextResources load_text_resources(const PipelineConfig& c) {
  TextResources r;
  r.stopwords = std::make_unique<StopwordList>(c.stopwords.empty() ? StopwordList::builtin(c.language)
                                                                   : StopwordList::from_file(c.stopwords, c.language));
  if (!c.dictionary.empty()) r.dictionary = std::make_unique<WordSet>(StopwordList::read_word_file(c.dictionary));
  if (c.stem && !stemmer_available(c.language)) throw ConfigError("no stemmer for language '" + c.language + "'");
  r.pipeline.stopwords = r.stopwords.get();
  r.pipeline.dictionary = r.dictionary.get();
  r.pipeline.tokenizer.keep_digits = c.keep_digits;
  r.pipeline.stem = c.stem;
  r.pipeline.language = c.language;
  return r;
}

inline std::unique_ptr<SentimentScorer> make_scorer(const PipelineConfig& c) {
  if (!c.precomputed_sentiment.empty()) {
    return std::make_unique<PrecomputedScorer>(PrecomputedScorer::from_file(c.precomputed_sentiment));
  }
  if (!c.lexicon.empty()) return std::make_unique<LexiconScorer>(LexiconScorer::from_file(c.lexicon));
  return std::make_unique<LexiconScorer>(LexiconScorer::builtin());
}

inline LoadedMessages load_config_messages(const PipelineConfig& c) {
  MessageFormat fmt = message_format_from_path(c.messages);
  if (c.messages_format == "jsonl") fmt = MessageFormat::jsonl;
  if (c.messages_format == "csv") fmt = MessageFormat::csv;
  return load_messages(c.messages, fmt);
}

struct FeatureStage {
  std::vector<WeekFeatures> rows;
  std::vector<std::string> outputs;  // relative to the output directory
  std::size_t messages = 0;
  std::size_t rejected = 0;
  std::size_t dropped = 0;
};

/// Loads the corpus, extracts weekly features and writes features.csv,
/// rejections.csv and (optionally) per-week graph exports.
inline FeatureStage run_features(const PipelineConfig& c) {
  check_inputs(c, true, false);
  const std::filesystem::path out_dir = c.output_dir;
  TextResources text = load_text_resources(c);
  const auto scorer = make_scorer(c);

  FeatureOptions opts;
  opts.text = text.pipeline;
  opts.window_size = c.window_size;
  opts.focal_token = resolve_focal_token(c.focal_word, text.pipeline);
  opts.betweenness_mode = c.betweenness_mode;
  opts.samples = c.samples;
  opts.seed = c.seed;
  opts.workers = c.workers;
  opts.keep_graphs = c.export_graphs;

  const LoadedMessages loaded = load_config_messages(c);
  const WeekGrid grid = c.grid();
  const WindowedCorpus corpus = partition_weeks(loaded.messages, grid.start, grid.weeks);
  const ParentIndex parents(loaded.messages);
  const auto results = extract_features(corpus, parents, *scorer, opts);

  FeatureStage stage;
  stage.messages = loaded.messages.size();
  stage.rejected = loaded.rejections.size();
  stage.dropped = corpus.dropped;
  for (const auto& r : results) stage.rows.push_back(r.features);

  write_text_file(out_dir / "rejections.csv", rejections_to_csv(loaded.rejections));
  stage.outputs.emplace_back("rejections.csv");
  write_text_file(out_dir / "features.csv", features_csv(stage.rows, grid));
  stage.outputs.emplace_back("features.csv");

  if (c.export_graphs) {
    nlohmann::ordered_json summary = nlohmann::ordered_json::array();
    for (const auto& r : results) {
      char stem[48];
      std::snprintf(stem, sizeof stem, "graphs/week_%03d", r.features.week);
      const std::string inter = std::string(stem) + "_interaction.csv";
      const std::string words = std::string(stem) + "_words.csv";
      write_text_file(out_dir / inter, edge_list_csv(r.interaction->graph));
      write_text_file(out_dir / words, edge_list_csv(*r.words));
      stage.outputs.push_back(inter);
      stage.outputs.push_back(words);
      auto inet = graph_summary(r.interaction->graph);
      inet["self_replies"] = r.interaction->self_replies;
      inet["dangling_parents"] = r.interaction->dangling_parents;
      inet["comments"] = r.interaction->comments;
      summary.push_back({{"week", r.features.week}, {"interaction", inet}, {"words", graph_summary(*r.words)}});
    }
    write_text_file(out_dir / "graphs/summary.json", summary.dump(2) + "\n");
    stage.outputs.emplace_back("graphs/summary.json");
  }
  return stage;
}

}  // namespace brandpulse::pipeline
