// Copyright 2026 The nashplay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "nashplay/harness.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "nashplay/game_io.h"
#include "nashplay/rng.h"
#include "nashplay/version.h"

namespace nashplay {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> Lines(const fs::path& path) {
  std::vector<std::string> out;
  std::ifstream in(path);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Fresh scratch directory per test.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& name)
      : path_(fs::temp_directory_path() / ("nashplay_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

json TinyConfig(const fs::path& out) {
  return {{"game",
           {{"generator", "random"},
            {"horizon", 2},
            {"states", 2},
            {"max_actions", 2},
            {"min_actions", 2},
            {"seed", 3}}},
          {"algorithm", "nash_q"},
          {"episodes", 40},
          {"seeds", {5, 9}},
          {"output_dir", out.string()}};
}

TEST(ParseRunConfigTest, DefaultsAndFields) {
  const RunConfig config = ParseRunConfig(TinyConfig("/tmp/x"));
  EXPECT_EQ(config.algorithm, Algorithm::kNashQ);
  EXPECT_EQ(config.episodes, 40);
  EXPECT_EQ(config.seeds, (std::vector<std::uint64_t>{5, 9}));
  EXPECT_EQ(config.c, 2.0);
  EXPECT_EQ(config.p, 0.01);
  EXPECT_FALSE(config.iota.has_value());
  EXPECT_EQ(config.game.generator, "random");
  EXPECT_EQ(config.game.seed, 3u);
  EXPECT_TRUE(config.evaluation.oracle);
}

TEST(ParseRunConfigTest, SeedBlockExpandsDeterministically) {
  json doc = TinyConfig("/tmp/x");
  doc["seeds"] = {{"base", 7}, {"count", 4}};
  const RunConfig config = ParseRunConfig(doc);
  ASSERT_EQ(config.seeds.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(config.seeds[i], DeriveSeed(7, i));
}

TEST(ParseRunConfigTest, RejectsInvalidConfigs) {
  auto rejects = [](const std::function<void(json&)>& edit) {
    json doc = TinyConfig("/tmp/x");
    edit(doc);
    EXPECT_THROW(ParseRunConfig(doc), std::invalid_argument) << doc.dump();
  };
  rejects([](json& d) { d["unknown"] = 1; });
  rejects([](json& d) { d["episodes"] = 0; });
  rejects([](json& d) { d["seeds"] = json::array(); });
  rejects([](json& d) { d["seeds"] = {4, 4}; });
  rejects([](json& d) { d["game"]["generator"] = "chess"; });
  rejects([](json& d) { d["game"]["states"] = 0; });
  rejects([](json& d) { d["game"]["file"] = "g.json"; });
  rejects([](json& d) { d["hyperparams"] = {{"gamma", 0.9}}; });
  rejects([](json& d) { d.erase("game"); });
  EXPECT_ANY_THROW([] {
    json doc = TinyConfig("/tmp/x");
    doc["algorithm"] = "sarsa";
    ParseRunConfig(doc);
  }());
}

TEST(ApplyOverrideTest, DottedPathsAndValueTypes) {
  json doc = TinyConfig("/tmp/x");
  ApplyOverride(doc, "hyperparams.c=4");
  ApplyOverride(doc, "algorithm=nash_v");
  ApplyOverride(doc, "game.horizon=3");
  ApplyOverride(doc, "evaluation.exact_exploitability=true");
  EXPECT_EQ(doc["hyperparams"]["c"], 4);
  EXPECT_EQ(doc["algorithm"], "nash_v");
  const RunConfig config = ParseRunConfig(doc);
  EXPECT_EQ(config.c, 4.0);
  EXPECT_EQ(config.algorithm, Algorithm::kNashV);
  EXPECT_EQ(config.game.horizon, 3);
  EXPECT_TRUE(config.evaluation.exact_exploitability);
  EXPECT_THROW(ApplyOverride(doc, "novalue"), std::invalid_argument);
  EXPECT_THROW(ApplyOverride(doc, "a..b=1"), std::invalid_argument);
}

TEST(ConfigHashTest, IgnoresOutputDirAndThreadsOnly) {
  const RunConfig base = ParseRunConfig(TinyConfig("/tmp/a"));
  RunConfig moved = base;
  moved.output_dir = "/tmp/b";
  moved.threads = 7;
  EXPECT_EQ(ConfigHash(base), ConfigHash(moved));
  RunConfig changed = base;
  changed.c = 1.0;
  EXPECT_NE(ConfigHash(base), ConfigHash(changed));
  RunConfig reseeded = base;
  reseeded.seeds = {5, 10};
  EXPECT_NE(ConfigHash(base), ConfigHash(reseeded));
  // Canonical form parses back to the same hash.
  json canonical = RunConfigToJson(base);
  canonical["output_dir"] = "/tmp/c";
  EXPECT_EQ(ConfigHash(ParseRunConfig(canonical)), ConfigHash(base));
  EXPECT_EQ(HashHex(0xabcULL), "0000000000000abc");
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(BuildGameTest, SourcesAndValidation) {
  GameSpec parity;
  parity.generator = "parity";
  parity.parity_n = 3;
  EXPECT_TRUE(BuildGame(parity) == MakeParityGame(3));

  GameSpec inline_spec;
  inline_spec.inline_game = GameToJson(MarkovGame(1, 1, 1, 1, {1.0}, {0.5}, 0));
  EXPECT_EQ(BuildGame(inline_spec).reward(0, 0, 0, 0), 0.5);
  inline_spec.inline_game["rewards"] = {1.5};
  EXPECT_THROW(BuildGame(inline_spec), std::invalid_argument);

  GameSpec random;
  random.generator = "random";
  random.seed = 4;
  EXPECT_TRUE(BuildGame(random) == BuildGame(random));
}

TEST(ResolveThreadsTest, FlagThenEnvironment) {
  EXPECT_EQ(ResolveThreads(3), 3);
  setenv("NASHPLAY_THREADS", "2", 1);
  EXPECT_EQ(ResolveThreads(0), 2);
  unsetenv("NASHPLAY_THREADS");
  EXPECT_GE(ResolveThreads(0), 1);
}

TEST(GapStatisticsTest, RunningMeanAndAverageGap) {
  const std::vector<double> values = {1, 2, 3, 4, 5};
  EXPECT_EQ(RunningMean(values, 2), (std::vector<double>{1, 1.5, 2.5, 3.5, 4.5}));
  EXPECT_EQ(RunningMean(values, 1), values);
  const std::vector<double> upper = {3, 3, 2, 2};
  const std::vector<double> lower = {0, 1, 1, 2};
  EXPECT_DOUBLE_EQ(AverageGap(upper, lower, 2), 2.5);
  EXPECT_DOUBLE_EQ(AverageGap(upper, lower, 4), 1.5);
  EXPECT_THROW(AverageGap(upper, lower, 5), std::invalid_argument);
}

TEST(GapStatisticsTest, SlopeOfPowerLaw) {
  std::vector<double> curve(10000);
  for (int k = 1; k <= 10000; ++k) curve[k - 1] = 3.0 / std::sqrt(k);
  const SlopeFit fit = FitGapSlope(curve);
  EXPECT_EQ(fit.window, 100);
  EXPECT_EQ(fit.fit_start, 1000);
  EXPECT_EQ(fit.fit_end, 10000);
  EXPECT_NEAR(fit.slope, -0.5, 0.01);
  const SlopeFit flat = FitGapSlope(std::vector<double>(500, 2.0));
  EXPECT_NEAR(flat.slope, 0.0, 1e-12);
}

TEST(TrainTest, WritesSelfDescribingFiles) {
  ScratchDir dir("train_files");
  const RunConfig config = ParseRunConfig(TinyConfig(dir.path() / "run"));
  const RunReport report = Train(config, true);
  const fs::path run = dir.path() / "run";
  const std::string hash = HashHex(ConfigHash(config));
  for (const char* name : {"summary.json", "config.json", "gap.csv"}) {
    EXPECT_TRUE(fs::exists(run / name)) << name;
  }
  const json summary = json::parse(Slurp(run / "summary.json"));
  EXPECT_EQ(summary["config_hash"], hash);
  EXPECT_EQ(summary["version"], kVersion);
  EXPECT_EQ(summary["per_seed"].size(), 2u);
  EXPECT_EQ(json::parse(Slurp(run / "config.json"))["config_hash"], hash);
  ASSERT_TRUE(summary["v_star"].is_number());

  for (std::uint64_t seed : {5, 9}) {
    const fs::path seed_dir = run / ("seed_" + std::to_string(seed));
    ASSERT_TRUE(fs::exists(seed_dir / "snapshot.bin"));
    const auto lines = Lines(seed_dir / "trace.jsonl");
    ASSERT_EQ(lines.size(), 41u);
    const json header = json::parse(lines[0]);
    EXPECT_EQ(header["type"], "header");
    EXPECT_EQ(header["config_hash"], hash);
    EXPECT_EQ(header["version"], kVersion);
    const json first = json::parse(lines[1]);
    EXPECT_EQ(first["k"], 1);
    EXPECT_EQ(first["Vup1"], 2.0);
    EXPECT_EQ(first["Vlow1"], 0.0);
    EXPECT_EQ(first["visited"].size(), 2u);
    EXPECT_EQ(json::parse(lines[40])["k"], 40);
    const Snapshot snap = ReadSnapshot((seed_dir / "snapshot.bin").string());
    EXPECT_EQ(HashHex(snap.header.config_hash), hash);
    EXPECT_EQ(snap.q->episodes, 40);
  }

  const auto csv = Lines(run / "gap.csv");
  ASSERT_EQ(csv.size(), 42u);
  EXPECT_EQ(csv[0][0], '#');
  EXPECT_NE(csv[0].find(hash), std::string::npos);
  EXPECT_EQ(csv[1], "k,mean_gap,min_gap,max_gap");
  EXPECT_EQ(report.mean_gap_curve.size(), 40u);
  EXPECT_EQ(report.seeds.size(), 2u);
}

TEST(TrainTest, RepeatedRunsAreByteIdentical) {
  ScratchDir dir("train_repeat");
  json doc = TinyConfig(dir.path() / "a");
  doc["algorithm"] = "nash_v";
  Train(ParseRunConfig(doc), true);
  doc["output_dir"] = (dir.path() / "b").string();
  doc["threads"] = 2;
  Train(ParseRunConfig(doc), true);
  for (const auto& entry : fs::recursive_directory_iterator(dir.path() / "a")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), dir.path() / "a");
    EXPECT_EQ(Slurp(entry.path()), Slurp(dir.path() / "b" / rel)) << rel;
  }
}

TEST(EvaluateTest, ExactAndMonteCarloReports) {
  ScratchDir dir("evaluate");
  json doc = TinyConfig(dir.path() / "run");
  doc["seeds"] = {5};
  Train(ParseRunConfig(doc), true);
  const fs::path seed_dir = dir.path() / "run" / "seed_5";
  EvaluationFlags flags;
  flags.exact_exploitability = true;
  flags.mc_exploitability = true;
  flags.mc_episodes = 5000;
  const json report =
      EvaluateSnapshotFile((seed_dir / "snapshot.bin").string(), flags);
  EXPECT_EQ(report["exact"]["status"], "ok");
  EXPECT_GE(report["exact"]["exploitability"].get<double>(), -1e-12);
  EXPECT_EQ(report["mc"]["responders"], "tree_best_response");
  EXPECT_TRUE(report["oracle"]["v_star"].is_number());

  const auto trace = Lines(seed_dir / "trace.jsonl");
  EXPECT_EQ(json::parse(trace.back())["type"], "evaluation");
  const json summary = json::parse(Slurp(dir.path() / "run" / "summary.json"));
  EXPECT_EQ(summary["per_seed"][0]["evaluation"], report);

  // Idempotent: a second pass leaves every file unchanged.
  std::vector<std::string> before;
  for (const char* f : {"trace.jsonl", "evaluation.json"}) {
    before.push_back(Slurp(seed_dir / f));
  }
  before.push_back(Slurp(dir.path() / "run" / "summary.json"));
  EvaluateSnapshotFile((seed_dir / "snapshot.bin").string(), flags);
  EXPECT_EQ(Slurp(seed_dir / "trace.jsonl"), before[0]);
  EXPECT_EQ(Slurp(seed_dir / "evaluation.json"), before[1]);
  EXPECT_EQ(Slurp(dir.path() / "run" / "summary.json"), before[2]);
  EXPECT_EQ(Lines(seed_dir / "trace.jsonl").size(), trace.size());
}

TEST(EvaluateTest, OverflowIsReportedWithFallback) {
  ScratchDir dir("evaluate_overflow");
  json doc = TinyConfig(dir.path() / "run");
  doc["seeds"] = {5};
  doc["episodes"] = 300;
  Train(ParseRunConfig(doc), true);
  EvaluationFlags flags;
  flags.exact_exploitability = true;
  flags.mc_exploitability = true;
  flags.mc_episodes = 2000;
  flags.max_support = 2;
  const json report = EvaluateSnapshotFile(
      (dir.path() / "run" / "seed_5" / "snapshot.bin").string(), flags);
  EXPECT_EQ(report["exact"]["status"], "overflow");
  EXPECT_EQ(report["mc"]["responders"], "markov_best_response_to_final_policy");
}

}  // namespace
}  // namespace nashplay
