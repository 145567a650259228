#pragma once

// Tokenization, stopword/dictionary filtering, stemming and corpus
// vocabulary counts.

#include <clocale>
#include <cwctype>
#include <fstream>
#include <locale.h>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "brandpulse/error.hpp"
#include "brandpulse/stemmer.hpp"
#include "brandpulse/stopwords.hpp"
#include "brandpulse/utf8.hpp"

namespace brandpulse {

using TokenList = std::vector<std::string>;
using WordSet = std::unordered_set<std::string>;

struct TokenStream {
  std::string message_id;
  TokenList tokens;
};

struct TokenizerOptions {
  bool keep_digits = false;  // keep tokens made only of digits
};

namespace detail {

// glibc's C.UTF-8 locale gives Unicode-wide classification and case mapping.
inline locale_t utf8_ctype() {
  static const locale_t loc = [] {
    locale_t l = newlocale(LC_CTYPE_MASK, "C.UTF-8", static_cast<locale_t>(nullptr));
    if (!l) l = newlocale(LC_CTYPE_MASK, "C.utf8", static_cast<locale_t>(nullptr));
    return l;
  }();
  return loc;
}

inline bool is_alpha(char32_t c) {
  if (c < 0x80) return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  if (auto loc = utf8_ctype()) return iswalpha_l(static_cast<wint_t>(c), loc) != 0;
  return false;
}

inline bool is_digit(char32_t c) {
  if (c < 0x80) return c >= '0' && c <= '9';
  if (auto loc = utf8_ctype()) return iswdigit_l(static_cast<wint_t>(c), loc) != 0;
  return false;
}

inline char32_t to_lower(char32_t c) {
  if (c < 0x80) return (c >= 'A' && c <= 'Z') ? c + 32 : c;
  if (auto loc = utf8_ctype()) return static_cast<char32_t>(towlower_l(static_cast<wint_t>(c), loc));
  return c;
}

inline bool is_hyphen(char32_t c) { return c == U'-' || c == U'‐' || c == U'‑'; }

}  // namespace detail

/// Splits text into lowercase word tokens.
///
/// A token is a maximal run of letters and digits. A hyphen joins two runs
/// when it sits directly between word characters ("e-mail"); any other
/// character, apostrophes included, separates tokens ("l'azienda" gives
/// "l", "azienda"). Tokens without a letter are dropped unless
/// `keep_digits` is set.
inline TokenList tokenize(std::string_view body, const TokenizerOptions& opts = {}) {
  TokenList out;
  const std::u32string text = utf8::to_u32(body);
  std::string current;
  bool has_letter = false;

  auto flush = [&] {
    if (!current.empty() && (has_letter || opts.keep_digits)) out.push_back(std::move(current));
    current.clear();
    has_letter = false;
  };
  auto is_word = [](char32_t c) { return detail::is_alpha(c) || detail::is_digit(c); };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char32_t c = text[i];
    if (is_word(c)) {
      has_letter = has_letter || detail::is_alpha(c);
      utf8::append(current, detail::to_lower(c));
    } else if (detail::is_hyphen(c) && !current.empty() && i + 1 < text.size() && is_word(text[i + 1])) {
      current.push_back('-');
    } else {
      flush();
    }
  }
  flush();
  return out;
}

class StopwordList {
 public:
  StopwordList(std::string language, WordSet words) : language_(std::move(language)), words_(std::move(words)) {
    if (words_.empty()) throw ConfigError("stopword list for '" + language_ + "' is empty");
  }

  static StopwordList builtin(const std::string& language) {
    const auto list = stopwords::builtin(language);
    WordSet words;
    for (auto w : list) words.emplace(w);
    if (words.empty()) throw ConfigError("no built-in stopword list for language '" + language + "'");
    return {language, std::move(words)};
  }

  static StopwordList from_file(const std::string& path, std::string language) {
    return {std::move(language), read_word_file(path)};
  }

  // One word per line, UTF-8. Blank lines and lines starting with '#' are skipped.
  static WordSet read_word_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read word list: " + path);
    WordSet words;
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
      std::size_t b = 0;
      while (b < line.size() && (line[b] == ' ' || line[b] == '\t')) ++b;
      if (b == line.size() || line[b] == '#') continue;
      words.insert(line.substr(b));
    }
    return words;
  }

  bool contains(const std::string& w) const { return words_.contains(w); }
  const std::string& language() const { return language_; }
  std::size_t size() const { return words_.size(); }

 private:
  std::string language_;
  WordSet words_;
};

/// Drops stopwords and, when a dictionary is supplied, out-of-dictionary
/// tokens. Survivors keep their relative order and close up the gaps.
inline TokenList filter_tokens(const TokenList& tokens, const StopwordList& stop, const WordSet* dictionary = nullptr) {
  TokenList out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (stop.contains(t)) continue;
    if (dictionary && !dictionary->contains(t)) continue;
    out.push_back(t);
  }
  return out;
}

inline bool stemmer_available(std::string_view language) {
  return language == "en" || language == "english" || language == "it" || language == "italian";
}

inline TokenList stem_tokens(const TokenList& tokens, std::string_view language) {
  if (!stemmer_available(language)) throw ConfigError("no stemmer for language '" + std::string(language) + "'");
  const bool english = language == "en" || language == "english";
  TokenList out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(english ? stem::porter(t) : stem::italian(t));
  return out;
}

/// The full text pipeline applied to a message body.
struct TextPipeline {
  const StopwordList* stopwords = nullptr;
  const WordSet* dictionary = nullptr;
  TokenizerOptions tokenizer;
  bool stem = false;
  std::string language = "it";

  TokenList operator()(std::string_view body) const {
    TokenList tokens = tokenize(body, tokenizer);
    if (stopwords) tokens = filter_tokens(tokens, *stopwords, dictionary);
    if (stem) tokens = stem_tokens(tokens, language);
    return tokens;
  }
};

class Vocabulary {
 public:
  void add(const std::string& word, std::size_t n = 1) {
    if (n == 0) return;
    counts_[word] += n;
    total_ += n;
  }

  void add(const TokenList& tokens) {
    for (const auto& t : tokens) add(t);
  }

  void merge(const Vocabulary& other) {
    for (const auto& [w, c] : other.counts_) add(w, c);
  }

  std::size_t count(const std::string& word) const {
    auto it = counts_.find(word);
    return it == counts_.end() ? 0 : it->second;
  }

  std::size_t total() const { return total_; }
  std::size_t distinct() const { return counts_.size(); }
  const std::unordered_map<std::string, std::size_t>& counts() const { return counts_; }

 private:
  std::unordered_map<std::string, std::size_t> counts_;
  std::size_t total_ = 0;
};

inline Vocabulary build_vocabulary(const std::vector<TokenList>& streams) {
  Vocabulary v;
  for (const auto& s : streams) v.add(s);
  return v;
}

}  // namespace brandpulse
