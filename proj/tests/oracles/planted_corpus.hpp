#pragma once

// Synthetic forum corpus with a planted price relationship:
//
//   price_t = 20 + 0.3 control_t + b z_{t-1} + noise
//
// where z is the standardized weekly co-occurrence count of the generated
// text (counted with the pair-enumeration oracle) and control is a random
// walk. Bodies are space-separated content words, so the text pipeline sees
// exactly the generated tokens.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "brandpulse/corpus.hpp"
#include "brandpulse/csv.hpp"
#include "brandpulse/textproc.hpp"
#include "oracles/pair_counter.hpp"

namespace brandpulse::oracle {

struct PlantedOptions {
  int weeks = 94;
  std::uint64_t seed = 7;
  std::string start = "2015-01-05T00:00:00Z";
  std::string focal = "brandco";
  double activity_effect = 2.0;  // b
  double noise_sd = 0.6;
  std::size_t vocabulary = 400;
  std::size_t authors = 40;
};

struct PlantedCorpus {
  PlantedOptions options;
  std::vector<Message> messages;
  std::vector<double> activity_words;  // oracle count per week
  std::vector<double> control;
  std::vector<double> price;
};

/// Pronounceable three-syllable words that are neither stopwords nor in the
/// built-in sentiment lexicon.
inline std::vector<std::string> synthetic_words(std::size_t count, std::mt19937_64& rng) {
  static const char* cons = "bcdfglmnprstvz";
  static const char* vows = "aeiou";
  const auto stop = StopwordList::builtin("it");
  std::uniform_int_distribution<int> c(0, 13), v(0, 4);
  std::vector<std::string> out;
  while (out.size() < count) {
    std::string w;
    for (int s = 0; s < 3; ++s) {
      w.push_back(cons[c(rng)]);
      w.push_back(vows[v(rng)]);
    }
    if (stop.contains(w) || std::find(out.begin(), out.end(), w) != out.end()) continue;
    out.push_back(w);
  }
  return out;
}

inline PlantedCorpus make_planted_corpus(const PlantedOptions& opts = {}) {
  PlantedCorpus pc;
  pc.options = opts;
  std::mt19937_64 rng(opts.seed);
  const auto words = synthetic_words(opts.vocabulary, rng);
  static const char* mood[] = {"ottimo", "grazie", "successo", "crisi", "problema", "bene", "ritardo", "bravo"};
  const Timestamp start = *parse_timestamp(opts.start);

  std::uniform_int_distribution<int> n_msgs(15, 45), len(8, 14);
  std::uniform_int_distribution<std::size_t> pick_word(0, words.size() - 1), pick_author(0, opts.authors - 1);
  std::uniform_int_distribution<int> pick_mood(0, 7);
  std::uniform_int_distribution<long long> second(0, kWeek.count() - 1);
  std::bernoulli_distribution reply(0.7), focal(0.5), has_mood(0.4);
  std::normal_distribution<double> step(0.0, 1.5), noise(0.0, opts.noise_sd);

  std::size_t next_id = 0;
  for (int t = 0; t < opts.weeks; ++t) {
    const int m = n_msgs(rng);
    std::vector<long long> offsets(static_cast<std::size_t>(m));
    for (auto& o : offsets) o = second(rng);
    std::sort(offsets.begin(), offsets.end());
    std::vector<TokenList> streams;
    const std::size_t week_begin = pc.messages.size();
    for (int i = 0; i < m; ++i) {
      Message msg;
      msg.id = "m" + std::to_string(next_id++);
      msg.author_id = "u" + std::to_string(pick_author(rng));
      msg.timestamp = start + t * kWeek + std::chrono::seconds{offsets[static_cast<std::size_t>(i)]};
      const std::size_t earlier = pc.messages.size() - week_begin;
      if (earlier > 0 && reply(rng)) {
        std::uniform_int_distribution<std::size_t> pick_parent(week_begin, pc.messages.size() - 1);
        msg.parent_id = pc.messages[pick_parent(rng)].id;
      }
      TokenList toks;
      const int L = len(rng);
      for (int k = 0; k < L; ++k) toks.push_back(words[pick_word(rng)]);
      if (focal(rng)) {
        std::uniform_int_distribution<int> pos(1, L - 1);
        toks[static_cast<std::size_t>(pos(rng))] = opts.focal;
      }
      if (has_mood(rng)) toks.push_back(mood[pick_mood(rng)]);
      for (std::size_t k = 0; k < toks.size(); ++k) msg.body += (k ? " " : "") + toks[k];
      streams.push_back(std::move(toks));
      pc.messages.push_back(std::move(msg));
    }
    pc.activity_words.push_back(static_cast<double>(count_pairs(streams, 7).events));
  }

  double mean = 0.0, sd = 0.0;
  for (double a : pc.activity_words) mean += a;
  mean /= static_cast<double>(opts.weeks);
  for (double a : pc.activity_words) sd += (a - mean) * (a - mean);
  sd = std::sqrt(sd / static_cast<double>(opts.weeks));

  double c = 100.0;
  for (int t = 0; t < opts.weeks; ++t) {
    if (t > 0) c += step(rng);
    pc.control.push_back(c);
    const double z_prev = t > 0 ? (pc.activity_words[static_cast<std::size_t>(t - 1)] - mean) / sd : 0.0;
    pc.price.push_back(20.0 + 0.3 * c + opts.activity_effect * z_prev + noise(rng));
  }
  return pc;
}

inline std::string messages_jsonl(const std::vector<Message>& messages) {
  std::string out;
  for (const auto& m : messages) {
    nlohmann::ordered_json j;
    j["id"] = m.id;
    j["author_id"] = m.author_id;
    if (m.parent_id) j["parent_id"] = *m.parent_id;
    j["timestamp"] = format_timestamp(m.timestamp);
    j["body"] = m.body;
    out += j.dump() + "\n";
  }
  return out;
}

inline std::string week_series_csv(const std::vector<double>& v) {
  std::string out = "week,value\n";
  for (std::size_t t = 0; t < v.size(); ++t) out += std::to_string(t) + "," + csv::format_double(v[t]) + "\n";
  return out;
}

/// Writes messages.jsonl, price.csv, control.csv and config.yaml into `dir`.
inline void write_planted_inputs(const PlantedCorpus& pc, const std::filesystem::path& dir,
                                 const std::string& output_dir = "out") {
  std::filesystem::create_directories(dir);
  auto put = [&](const char* name, const std::string& text) {
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    f << text;
  };
  put("messages.jsonl", messages_jsonl(pc.messages));
  put("price.csv", week_series_csv(pc.price));
  put("control.csv", week_series_csv(pc.control));
  put("config.yaml",
      "inputs:\n"
      "  messages: messages.jsonl\n"
      "  price: price.csv\n"
      "  control: control.csv\n"
      "horizon:\n"
      "  start: \"" + pc.options.start + "\"\n"
      "  weeks: " + std::to_string(pc.options.weeks) + "\n"
      "text:\n"
      "  language: it\n"
      "  window_size: 7\n"
      "focal_word: " + pc.options.focal + "\n"
      "betweenness:\n"
      "  mode: exact\n"
      "  seed: 42\n"
      "workers: 4\n"
      "output_dir: " + output_dir + "\n");
}

}  // namespace brandpulse::oracle
