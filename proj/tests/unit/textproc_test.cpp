#include <algorithm>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "brandpulse/graph.hpp"
#include "brandpulse/textproc.hpp"

using namespace brandpulse;

namespace {

StopwordList stop(std::initializer_list<const char*> words) {
  WordSet s;
  for (auto w : words) s.emplace(w);
  return StopwordList("it", s);
}

bool is_subsequence(const TokenList& sub, const TokenList& full) {
  std::size_t i = 0;
  for (const auto& t : full) {
    if (i < sub.size() && sub[i] == t) ++i;
  }
  return i == sub.size();
}

}  // namespace

TEST(Tokenize, HelloDolly) { EXPECT_EQ(tokenize("Hello Dolly"), (TokenList{"hello", "dolly"})); }

TEST(Tokenize, Empty) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenize, HyphenJoinsWordCharacters) {
  EXPECT_EQ(tokenize("E-mail, e-mail!"), (TokenList{"e-mail", "e-mail"}));
  EXPECT_EQ(tokenize("- trailing- -leading"), (TokenList{"trailing", "leading"}));
}

TEST(Tokenize, ApostropheSplitsAndDigitsDropped) {
  EXPECT_EQ(tokenize("L'azienda ha 2015 dipendenti e 3d"), (TokenList{"l", "azienda", "ha", "dipendenti", "e", "3d"}));
  TokenizerOptions keep;
  keep.keep_digits = true;
  EXPECT_EQ(tokenize("anno 2015", keep), (TokenList{"anno", "2015"}));
}

TEST(Tokenize, UnicodeLettersLowercased) {
  EXPECT_EQ(tokenize("PERCHÉ Città è"), (TokenList{"perché", "città", "è"}));
  EXPECT_EQ(tokenize("Ärger über"), (TokenList{"ärger", "über"}));
}

TEST(Tokenize, NoWhitespaceInTokens) {
  for (const auto& t : tokenize("uno\tdue\nтри  quattro cinque")) {
    EXPECT_EQ(t.find_first_of(" \t\n"), std::string::npos);
  }
}

TEST(FilterTokens, SingleRemovalAndAllStop) {
  const auto s = stop({"il"});
  EXPECT_EQ(filter_tokens({"il", "gatto", "nero"}, s), (TokenList{"gatto", "nero"}));
  EXPECT_TRUE(filter_tokens({"il", "il"}, s).empty());
}

TEST(FilterTokens, DictionaryDropCompactsStream) {
  const auto s = stop({"il"});
  const WordSet dict{"gatto", "nero"};
  const auto out = filter_tokens({"gatto", "nerrro", "nero"}, s, &dict);
  EXPECT_EQ(out, (TokenList{"gatto", "nero"}));
  const auto g = build_word_network(std::vector<TokenList>{out}, 1);
  EXPECT_EQ(g.weight("gatto", "nero"), 1u);
}

TEST(FilterTokens, OutputIsSubsequence) {
  std::mt19937_64 rng(1);
  const auto s = stop({"a", "b"});
  std::uniform_int_distribution<int> pick(0, 4);
  const char* words[] = {"a", "b", "c", "d", "e"};
  for (int rep = 0; rep < 100; ++rep) {
    TokenList in;
    for (int i = 0; i < 20; ++i) in.push_back(words[pick(rng)]);
    const auto out = filter_tokens(in, s);
    EXPECT_TRUE(is_subsequence(out, in));
    for (const auto& t : out) EXPECT_FALSE(s.contains(t));
  }
}

TEST(StopwordList, BuiltinAndEmpty) {
  EXPECT_TRUE(StopwordList::builtin("it").contains("il"));
  EXPECT_TRUE(StopwordList::builtin("en").contains("the"));
  EXPECT_THROW(StopwordList::builtin("xx"), ConfigError);
  EXPECT_THROW(StopwordList("it", {}), ConfigError);
}

TEST(Stem, DisabledIsIdentity) {
  TextPipeline p;
  const auto s = StopwordList::builtin("en");
  p.stopwords = &s;
  p.language = "en";
  EXPECT_EQ(p("Running runs"), (TokenList{"running", "runs"}));
}

TEST(Stem, InflectionsShareStem) {
  const auto en = stem_tokens({"running", "runs", "run"}, "en");
  EXPECT_EQ(en[0], en[1]);
  EXPECT_EQ(en[1], en[2]);
  const auto en2 = stem_tokens({"connection", "connected", "connecting", "connects"}, "en");
  EXPECT_TRUE(std::all_of(en2.begin(), en2.end(), [&](const auto& s) { return s == en2[0]; }));
  const auto it = stem_tokens({"parlare", "parlato", "parlando"}, "it");
  EXPECT_TRUE(std::all_of(it.begin(), it.end(), [&](const auto& s) { return s == it[0]; })) << it[0] << it[1] << it[2];
  const auto it2 = stem_tokens({"azienda", "aziende"}, "it");
  EXPECT_EQ(it2[0], it2[1]);
}

TEST(Stem, KnownPorterOutputs) {
  const std::map<std::string, std::string> cases{{"caresses", "caress"}, {"ponies", "poni"},  {"relational", "relat"},
                                                 {"hopping", "hop"},     {"agreed", "agre"}, {"generalization", "gener"}};
  for (const auto& [in, out] : cases) EXPECT_EQ(stem::porter(in), out) << in;
}

TEST(Stem, EmptyStreamAndUnsupportedLanguage) {
  EXPECT_TRUE(stem_tokens({}, "it").empty());
  EXPECT_THROW(stem_tokens({"x"}, "fi"), ConfigError);
  EXPECT_EQ(stem_tokens({"a", "bb", "ccc"}, "en").size(), 3u);
}

TEST(Vocabulary, Counts) {
  const auto v = build_vocabulary({{"a", "b"}, {"a"}});
  EXPECT_EQ(v.count("a"), 2u);
  EXPECT_EQ(v.count("b"), 1u);
  EXPECT_EQ(v.total(), 3u);
  EXPECT_EQ(build_vocabulary({}).total(), 0u);
}

TEST(Vocabulary, MatchesSinglePassRecount) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, 30), len(0, 12);
  std::vector<TokenList> streams(200);
  for (auto& s : streams) {
    const int L = len(rng);
    for (int i = 0; i < L; ++i) s.push_back("w" + std::to_string(pick(rng)));
  }
  std::map<std::string, std::size_t> brute;
  std::size_t total = 0;
  for (const auto& s : streams) {
    for (const auto& t : s) {
      ++brute[t];
      ++total;
    }
  }
  Vocabulary merged;
  merged.merge(build_vocabulary({streams.begin(), streams.begin() + 100}));
  merged.merge(build_vocabulary({streams.begin() + 100, streams.end()}));
  EXPECT_EQ(merged.total(), total);
  EXPECT_EQ(merged.distinct(), brute.size());
  for (const auto& [w, c] : brute) EXPECT_EQ(merged.count(w), c);
}
