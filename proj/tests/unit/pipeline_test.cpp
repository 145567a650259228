#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "brandpulse/csv.hpp"
#include "brandpulse/pipeline/run.hpp"
#include "oracles/planted_corpus.hpp"

namespace fs = std::filesystem;
using namespace brandpulse;
using namespace brandpulse::pipeline;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary | std::ios::trunc) << text;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = fs::temp_directory_path() / ("brandpulse_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string line(const std::string& id, const std::string& author, const std::string& parent, const std::string& ts,
                 const std::string& body) {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["author_id"] = author;
  if (!parent.empty()) j["parent_id"] = parent;
  j["timestamp"] = ts;
  j["body"] = body;
  return j.dump() + "\n";
}

// Three weeks from 2024-01-01. Week 0: replies b->a, c->a; week 1: chain
// c->b->a without the focal word; week 2: a single post. One message lies
// past the horizon and one line is malformed.
PipelineConfig hand_fixture(const fs::path& dir) {
  std::string msgs;
  msgs += line("m1", "a", "", "2024-01-02T10:00:00Z", "Brandco zeta kappa");
  msgs += line("m2", "b", "m1", "2024-01-02T11:00:00Z", "zeta brandco");
  msgs += line("m3", "c", "m1", "2024-01-03T09:00:00Z", "kappa BRANDCO!");
  msgs += line("m4", "a", "", "2024-01-09T09:00:00Z", "omega");
  msgs += line("m5", "b", "m4", "2024-01-09T10:00:00Z", "omega sigma");
  msgs += line("m6", "c", "m5", "2024-01-10T10:00:00Z", "sigma");
  msgs += "{not json\n";
  msgs += line("m7", "d", "", "2024-01-16T10:00:00Z", "brandco sigma");
  msgs += line("m8", "d", "", "2024-01-30T10:00:00Z", "brandco late");
  put(dir / "messages.jsonl", msgs);
  put(dir / "lexicon.csv", "word,polarity\nzeta,1\nomega,-1\n");
  PipelineConfig c;
  c.messages = (dir / "messages.jsonl").string();
  c.lexicon = (dir / "lexicon.csv").string();
  c.horizon_start = "2024-01-01T00:00:00Z";
  c.horizon_weeks = 3;
  c.language = "en";
  c.window_size = 2;
  c.focal_word = "brandco";
  c.output_dir = (dir / "out").string();
  return c;
}

PipelineConfig planted_config(const fs::path& dir, std::uint64_t seed = 7) {
  oracle::PlantedOptions o;
  o.seed = seed;
  oracle::write_planted_inputs(oracle::make_planted_corpus(o), dir);
  auto c = load_config(dir / "config.yaml");
  resolve_paths(c, dir);
  return c;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(BRANDPULSE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Features, HandFixtureValues) {
  TempDir tmp("hand");
  const auto c = hand_fixture(tmp.path());
  const auto stage = run_features(c);
  EXPECT_EQ(stage.messages, 8u);
  EXPECT_EQ(stage.rejected, 1u);
  EXPECT_EQ(stage.dropped, 1u);
  ASSERT_EQ(stage.rows.size(), 3u);
  const auto& w0 = stage.rows[0];
  const auto& w1 = stage.rows[1];
  const auto& w2 = stage.rows[2];

  EXPECT_EQ(w0.activity, 3.0);
  EXPECT_EQ(w1.activity, 3.0);
  EXPECT_EQ(w2.activity, 1.0);

  // Word pairs at distance <= 2, self pairs excluded.
  EXPECT_EQ(w0.activity_words, 5.0);
  EXPECT_EQ(w1.activity_words, 1.0);
  EXPECT_EQ(w2.activity_words, 1.0);

  // Star into a: degrees 2,1,1 over 2(n-1) = 4; no brokerage.
  EXPECT_DOUBLE_EQ(*w0.group_degree, 0.5);
  EXPECT_DOUBLE_EQ(*w0.group_betweenness, 0.0);
  // Chain c->b->a: b brokers one ordered pair.
  EXPECT_DOUBLE_EQ(*w1.group_degree, 0.5);
  EXPECT_DOUBLE_EQ(*w1.group_betweenness, 0.5);
  EXPECT_FALSE(w2.group_degree);
  EXPECT_FALSE(w2.group_betweenness);

  // brandco touches both other words in both directions; it is the only
  // path kappa -> zeta.
  EXPECT_DOUBLE_EQ(*w0.focal_degree, 1.0);
  EXPECT_DOUBLE_EQ(*w0.focal_betweenness, 0.5);
  EXPECT_FALSE(w0.focal_absent);
  EXPECT_EQ(w1.focal_degree, 0.0);
  EXPECT_EQ(w1.focal_betweenness, 0.0);
  EXPECT_TRUE(w1.focal_absent);
  EXPECT_DOUBLE_EQ(*w2.focal_degree, 0.5);
  EXPECT_EQ(w2.focal_betweenness, 0.0);

  // Scores 1, 1, 0.5 / 0, 0, 0.5 / 0.5.
  EXPECT_NEAR(*w0.sentiment, 2.5 / 3, 1e-12);
  EXPECT_NEAR(*w1.sentiment, 0.5 / 3, 1e-12);
  EXPECT_NEAR(*w2.sentiment, 0.5, 1e-12);
  EXPECT_NEAR(*w0.emotionality, std::sqrt(1.0 / 18), 1e-12);
  EXPECT_NEAR(*w1.emotionality, std::sqrt(1.0 / 18), 1e-12);
  EXPECT_EQ(*w2.emotionality, 0.0);

  // In-horizon counts: brandco 4, zeta 2, kappa 2, omega 2, sigma 3; total 13.
  const double b = std::log2(13.0 / 4), two = std::log2(13.0 / 2), s = std::log2(13.0 / 3);
  EXPECT_NEAR(*w0.complexity, (3 * b + 4 * two) / 7, 1e-12);
  EXPECT_NEAR(*w1.complexity, (2 * two + 2 * s) / 4, 1e-12);
  EXPECT_NEAR(*w2.complexity, (b + s) / 2, 1e-12);
}

TEST(Features, CsvLayoutAndGraphExports) {
  TempDir tmp("layout");
  const auto c = hand_fixture(tmp.path());
  run_features(c);
  const fs::path out = c.output_dir;
  const auto text = slurp(out / "features.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "week,window_start,activity,activity_words,group_degree,group_betweenness,focal_degree,"
            "focal_betweenness,sentiment,emotionality,complexity,focal_absent");
  const auto records = csv::parse(text);
  ASSERT_EQ(records.size(), 4u);
  EXPECT_EQ(records[2].fields[1], "2024-01-08T00:00:00Z");
  EXPECT_EQ(records[2].fields.back(), "1");
  EXPECT_EQ(records[3].fields[4], "");
  EXPECT_EQ(parse_features_csv(text), run_features(c).rows);

  EXPECT_EQ(slurp(out / "rejections.csv").substr(0, 12), "line,reason\n");
  EXPECT_TRUE(fs::exists(out / "graphs/week_000_interaction.csv"));
  EXPECT_TRUE(fs::exists(out / "graphs/week_002_words.csv"));
  const auto summary = nlohmann::json::parse(slurp(out / "graphs/summary.json"));
  ASSERT_EQ(summary.size(), 3u);
  EXPECT_EQ(summary[0]["words"]["total_weight"], 5);
  EXPECT_EQ(summary[1]["interaction"]["comments"], 2);
}

TEST(Features, FocalWordMustBeOneToken) {
  TempDir tmp("focal");
  auto c = hand_fixture(tmp.path());
  c.focal_word = "the";
  EXPECT_THROW(run_features(c), ConfigError);
  c.focal_word = "brandco zeta";
  EXPECT_THROW(run_features(c), ConfigError);
  c.focal_word = "BrandCo";
  EXPECT_NO_THROW(run_features(c));
}

TEST(Features, ActivityWordsMatchGraphTotals) {
  TempDir tmp("aw");
  auto c = planted_config(tmp.path());
  c.horizon_weeks = 20;
  const auto stage = run_features(c);
  const auto summary = nlohmann::json::parse(slurp(fs::path(c.output_dir) / "graphs/summary.json"));
  for (std::size_t w = 0; w < stage.rows.size(); ++w) {
    EXPECT_EQ(*stage.rows[w].activity_words, summary[w]["words"]["total_weight"].get<double>());
  }
}

TEST(Features, WorkerCountDoesNotChangeOutput) {
  TempDir tmp("workers");
  auto c = planted_config(tmp.path());
  c.horizon_weeks = 30;
  c.workers = 1;
  run_features(c);
  const auto one = slurp(fs::path(c.output_dir) / "features.csv");
  c.workers = 8;
  run_features(c);
  EXPECT_EQ(one, slurp(fs::path(c.output_dir) / "features.csv"));
}

TEST(Features, MissingColumnsNamed) {
  try {
    parse_features_csv("week,activity\n0,1\n");
    FAIL();
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("group_degree"), std::string::npos);
    EXPECT_NE(msg.find("complexity"), std::string::npos);
    EXPECT_EQ(msg.find("activity,"), std::string::npos);
  }
}

TEST(Ingest, ReportsCounts) {
  TempDir tmp("ingest");
  const auto j = ingest_check(hand_fixture(tmp.path()));
  EXPECT_EQ(j["messages"], 8);
  EXPECT_EQ(j["rejected"], 1);
  EXPECT_EQ(j["assigned"], 7);
  EXPECT_EQ(j["dropped_out_of_horizon"], 1);
  EXPECT_EQ(j["comments"], 4);
  EXPECT_EQ(j["dangling_parents"], 0);
  EXPECT_EQ(j["empty_weeks"], 0);
  EXPECT_FALSE(fs::exists(tmp.path() / "out"));
}

TEST(Run, ReproducibleOutputsAndManifest) {
  TempDir tmp("rerun");
  const auto c = planted_config(tmp.path());
  const fs::path out = c.output_dir;
  run_all(c);
  const std::vector<std::string> files = {"features.csv", "correlations.csv", "granger.csv", "regressions.csv",
                                          "models.csv",   "summary.md",       "manifest.json"};
  std::vector<std::string> first;
  for (const auto& f : files) first.push_back(slurp(out / f));
  fs::remove_all(out);
  run_all(c);
  for (std::size_t i = 0; i < files.size(); ++i) EXPECT_EQ(first[i], slurp(out / files[i])) << files[i];

  const auto m = nlohmann::json::parse(first.back());
  EXPECT_EQ(m["stage"], "run");
  EXPECT_EQ(m["config_sha256"], config_hash(c));
  bool listed = false;
  for (const auto& o : m["outputs"]) {
    if (o["path"] == "features.csv") {
      listed = true;
      EXPECT_EQ(o["sha256"], sha256_hex(first[0]));
    }
  }
  EXPECT_TRUE(listed);
}

TEST(Run, ManifestTracksInputContent) {
  TempDir tmp("hash");
  const auto c = planted_config(tmp.path());
  run_all(c);
  const auto before = nlohmann::json::parse(slurp(fs::path(c.output_dir) / "manifest.json"));
  {
    auto text = slurp(c.control);
    text.back() = '1';
    text += "\n";
    put(c.control, text);
  }
  run_all(c);
  const auto after = nlohmann::json::parse(slurp(fs::path(c.output_dir) / "manifest.json"));
  auto hash_of = [](const nlohmann::json& m, const std::string& role) {
    for (const auto& i : m["inputs"]) {
      if (i["role"] == role) return i["sha256"].get<std::string>();
    }
    return std::string();
  };
  EXPECT_NE(hash_of(before, "control"), hash_of(after, "control"));
  EXPECT_EQ(hash_of(before, "messages"), hash_of(after, "messages"));
  EXPECT_EQ(before["config_sha256"], after["config_sha256"]);
}

TEST(Run, FailureWritesErrorManifest) {
  TempDir tmp("fail");
  const auto c = planted_config(tmp.path());
  put(c.price, "week,value\n0,1\n1,oops\n");
  EXPECT_THROW(run_all(c), DataError);
  const fs::path out = c.output_dir;
  EXPECT_TRUE(fs::exists(out / "features.csv"));
  const auto m = nlohmann::json::parse(slurp(out / "error_manifest.json"));
  EXPECT_EQ(m["error"]["kind"], "data");
  EXPECT_NE(m["error"]["message"].get<std::string>().find("oops"), std::string::npos);
  EXPECT_FALSE(fs::exists(out / "manifest.json"));
}

TEST(Cli, ExitCodes) {
  TempDir tmp("cli");
  const auto dir = tmp.path();
  oracle::PlantedOptions o;
  oracle::write_planted_inputs(oracle::make_planted_corpus(o), dir);
  const std::string cfg = " -c " + (dir / "config.yaml").string();

  EXPECT_EQ(cli("ingest-check" + cfg), 0);
  EXPECT_EQ(cli("run --dry-run" + cfg), 0);
  EXPECT_FALSE(fs::exists(dir / "out"));
  EXPECT_EQ(cli("run -c " + (dir / "nope.yaml").string()), 1);
  EXPECT_EQ(cli("run" + cfg + " --window-size 0"), 1);
  EXPECT_EQ(cli("frobnicate"), 1);
  EXPECT_EQ(cli("analyze" + cfg), 1);  // no feature table yet

  EXPECT_EQ(cli("features" + cfg), 0);
  EXPECT_TRUE(fs::exists(dir / "out/features.csv"));
  EXPECT_EQ(cli("analyze" + cfg), 0);
  EXPECT_TRUE(fs::exists(dir / "out/summary.md"));

  put(dir / "short.csv", "week,activity\n0,1\n");
  EXPECT_EQ(cli("analyze" + cfg + " --features " + (dir / "short.csv").string()), 2);

  // Constant features, price and control: no cell can be estimated.
  std::string flat = "week,activity,activity_words,group_degree,group_betweenness,focal_degree,"
                     "focal_betweenness,sentiment,emotionality,complexity,focal_absent\n";
  std::string series = "week,value\n";
  for (int w = 0; w < 94; ++w) {
    flat += std::to_string(w) + ",1,1,1,1,1,1,1,1,1,0\n";
    series += std::to_string(w) + ",5\n";
  }
  put(dir / "flat.csv", flat);
  put(dir / "flat_series.csv", series);
  EXPECT_EQ(cli("analyze" + cfg + " --features " + (dir / "flat.csv").string() + " --price " +
                (dir / "flat_series.csv").string() + " --control " + (dir / "flat_series.csv").string()),
            3);

  put(dir / "price.csv", "week,value\n0,abc\n");
  EXPECT_EQ(cli("run" + cfg), 2);
  EXPECT_TRUE(fs::exists(dir / "out/error_manifest.json"));
}
