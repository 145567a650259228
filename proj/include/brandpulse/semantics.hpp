#pragma once

// Message sentiment scoring and the weekly sentiment, emotionality and
// complexity measures.

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "brandpulse/corpus.hpp"
#include "brandpulse/csv.hpp"
#include "brandpulse/error.hpp"
#include "brandpulse/textproc.hpp"

namespace brandpulse {

/// Sentiment in [0, 1]; 0.5 is neutral.
class SentimentScore {
 public:
  static constexpr double kNeutral = 0.5;

  explicit SentimentScore(double v) : value_(v) {
    if (!(v >= 0.0 && v <= 1.0)) throw DataError("sentiment score out of [0,1]: " + csv::format_double(v));
  }

  double value() const { return value_; }

 private:
  double value_;
};

class SentimentScorer {
 public:
  virtual ~SentimentScorer() = default;
  virtual SentimentScore score(const Message& msg) const = 0;
};

/// Mean polarity p of lexicon-matched tokens, mapped to (p + 1) / 2.
class LexiconScorer final : public SentimentScorer {
 public:
  explicit LexiconScorer(std::unordered_map<std::string, double> polarity, TokenizerOptions tokenizer = {})
      : polarity_(std::move(polarity)), tokenizer_(tokenizer) {
    for (const auto& [w, p] : polarity_) {
      if (!(p >= -1.0 && p <= 1.0)) throw DataError("lexicon polarity for '" + w + "' outside [-1,1]");
    }
  }

  static LexiconScorer from_csv_text(std::string_view text) {
    auto records = csv::parse(text);
    std::unordered_map<std::string, double> pol;
    if (records.empty()) return LexiconScorer(std::move(pol));
    const csv::Header header(records.front());
    const auto c_word = header.find("word");
    const auto c_pol = header.find("polarity");
    if (!c_word || !c_pol) throw DataError("lexicon header must be (word,polarity)");
    for (std::size_t r = 1; r < records.size(); ++r) {
      const auto& rec = records[r];
      const auto p = csv::parse_double(rec.fields.size() > *c_pol ? rec.fields[*c_pol] : "");
      if (!p || *c_word >= rec.fields.size()) {
        throw DataError("lexicon line " + std::to_string(rec.line) + ": malformed row");
      }
      pol[rec.fields[*c_word]] = *p;
    }
    return LexiconScorer(std::move(pol));
  }

  static LexiconScorer from_file(const std::string& path) { return from_csv_text(csv::read_file(path)); }

  /// Small bilingual (Italian/English) default lexicon.
  static LexiconScorer builtin();

  double polarity_of_text(std::string_view body) const {
    double sum = 0.0;
    std::size_t hits = 0;
    for (const auto& t : tokenize(body, tokenizer_)) {
      auto it = polarity_.find(t);
      if (it == polarity_.end()) continue;
      sum += it->second;
      ++hits;
    }
    return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
  }

  SentimentScore score(const Message& msg) const override {
    return SentimentScore(std::clamp((polarity_of_text(msg.body) + 1.0) / 2.0, 0.0, 1.0));
  }

  std::size_t size() const { return polarity_.size(); }

 private:
  std::unordered_map<std::string, double> polarity_;
  TokenizerOptions tokenizer_;
};

/// Scores supplied by an external classifier, keyed by message id.
class PrecomputedScorer final : public SentimentScorer {
 public:
  explicit PrecomputedScorer(std::unordered_map<std::string, double> scores) : scores_(std::move(scores)) {
    for (const auto& [id, s] : scores_) SentimentScore{s};
  }

  static PrecomputedScorer from_csv_text(std::string_view text) {
    auto records = csv::parse(text);
    std::unordered_map<std::string, double> scores;
    if (records.empty()) return PrecomputedScorer(std::move(scores));
    const csv::Header header(records.front());
    const auto c_id = header.find("message_id");
    const auto c_score = header.find("score");
    if (!c_id || !c_score) throw DataError("precomputed sentiment header must be (message_id,score)");
    for (std::size_t r = 1; r < records.size(); ++r) {
      const auto& rec = records[r];
      const auto s = csv::parse_double(rec.fields.size() > *c_score ? rec.fields[*c_score] : "");
      if (!s || *c_id >= rec.fields.size()) {
        throw DataError("precomputed sentiment line " + std::to_string(rec.line) + ": malformed row");
      }
      scores[rec.fields[*c_id]] = *s;
    }
    return PrecomputedScorer(std::move(scores));
  }

  static PrecomputedScorer from_file(const std::string& path) { return from_csv_text(csv::read_file(path)); }

  SentimentScore score(const Message& msg) const override {
    auto it = scores_.find(msg.id);
    if (it == scores_.end()) throw DataError("no precomputed sentiment for message " + msg.id);
    return SentimentScore(it->second);
  }

 private:
  std::unordered_map<std::string, double> scores_;
};

inline SentimentScore score_message(const Message& msg, const SentimentScorer& scorer) { return scorer.score(msg); }

/// Arithmetic mean; missing for an empty window.
inline std::optional<double> window_sentiment(std::span<const double> scores) {
  if (scores.empty()) return std::nullopt;
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

/// Population standard deviation; missing for an empty window.
inline std::optional<double> emotionality(std::span<const double> scores) {
  if (scores.empty()) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  if (*lo == *hi) return 0.0;
  const double mean = *window_sentiment(scores);
  double ss = 0.0;
  for (double s : scores) ss += (s - mean) * (s - mean);
  return std::sqrt(ss / static_cast<double>(scores.size()));
}

/// Mean surprisal -log2(count(w) / total) of the window's tokens against a
/// reference vocabulary. Unseen tokens are scored as if seen once.
inline std::optional<double> complexity(std::span<const TokenList> window_streams, const Vocabulary& vocab) {
  std::size_t tokens = 0;
  for (const auto& s : window_streams) tokens += s.size();
  if (tokens == 0) return std::nullopt;
  if (vocab.total() == 0) throw AnalysisError("complexity needs a non-empty reference vocabulary");
  const double total = static_cast<double>(vocab.total());
  double sum = 0.0;
  for (const auto& s : window_streams) {
    for (const auto& t : s) {
      const double c = static_cast<double>(std::max<std::size_t>(vocab.count(t), 1));
      sum += -std::log2(c / total);
    }
  }
  return sum / static_cast<double>(tokens);
}

inline std::optional<double> complexity(const std::vector<TokenList>& window_streams, const Vocabulary& vocab) {
  return complexity(std::span<const TokenList>(window_streams), vocab);
}

struct WindowSemantics {
  std::optional<double> sentiment;
  std::optional<double> emotionality;
  std::optional<double> complexity;
};

inline LexiconScorer LexiconScorer::builtin() {
  static const std::pair<const char*, double> entries[] = {
      // Italian
      {"bene", 0.6}, {"bello", 0.7}, {"bella", 0.7}, {"ottimo", 0.9}, {"ottima", 0.9}, {"grazie", 0.6},
      {"complimenti", 0.9}, {"successo", 0.8}, {"felice", 0.8}, {"contento", 0.7}, {"contenta", 0.7},
      {"bravo", 0.7}, {"brava", 0.7}, {"bravi", 0.7}, {"fantastico", 0.9}, {"eccellente", 0.9},
      {"positivo", 0.6}, {"positiva", 0.6}, {"crescita", 0.5}, {"vittoria", 0.8}, {"soddisfazione", 0.8},
      {"orgoglio", 0.7}, {"innovazione", 0.4}, {"premio", 0.6}, {"migliore", 0.6}, {"utile", 0.4},
      {"male", -0.6}, {"brutto", -0.7}, {"brutta", -0.7}, {"pessimo", -0.9}, {"pessima", -0.9},
      {"problema", -0.5}, {"problemi", -0.5}, {"crisi", -0.7}, {"perdita", -0.7}, {"perdite", -0.7},
      {"negativo", -0.6}, {"negativa", -0.6}, {"triste", -0.7}, {"sciopero", -0.6}, {"errore", -0.5},
      {"ritardo", -0.4}, {"guasto", -0.6}, {"difficile", -0.4}, {"preoccupazione", -0.6}, {"peggiore", -0.7},
      {"taglio", -0.5}, {"tagli", -0.5}, {"licenziamenti", -0.8}, {"disastro", -0.9}, {"purtroppo", -0.5},
      // English
      {"good", 0.6}, {"great", 0.8}, {"excellent", 0.9}, {"happy", 0.8}, {"thanks", 0.6}, {"success", 0.8},
      {"win", 0.7}, {"growth", 0.5}, {"proud", 0.7}, {"best", 0.7}, {"love", 0.8}, {"positive", 0.6},
      {"bad", -0.6}, {"poor", -0.6}, {"terrible", -0.9}, {"sad", -0.7}, {"problem", -0.5}, {"crisis", -0.7},
      {"loss", -0.7}, {"negative", -0.6}, {"fail", -0.7}, {"failure", -0.8}, {"worst", -0.9}, {"delay", -0.4},
  };
  std::unordered_map<std::string, double> pol;
  for (const auto& [w, p] : entries) pol.emplace(w, p);
  return LexiconScorer(std::move(pol));
}

}  // namespace brandpulse
