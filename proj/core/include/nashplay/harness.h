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
#ifndef NASHPLAY_HARNESS_H_
#define NASHPLAY_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nashplay/game.h"
#include "nashplay/schedules.h"
#include "nashplay/snapshot.h"

namespace nashplay {

// Exactly one source: a generator ("random" or "parity"), a file, or an
// inline game document.
struct GameSpec {
  std::string generator;
  int horizon = 2;
  int num_states = 2;
  int num_max_actions = 2;
  int num_min_actions = 2;
  std::uint64_t seed = 0;
  int parity_n = 2;
  std::string file;
  nlohmann::json inline_game;
};

struct EvaluationFlags {
  bool oracle = true;
  bool exact_exploitability = false;
  bool mc_exploitability = false;
  long long mc_episodes = 100000;
  std::size_t max_support = 200000;
};

struct RunConfig {
  GameSpec game;
  Algorithm algorithm = Algorithm::kNashQ;
  double c = 2.0;
  double p = 0.01;
  std::optional<double> iota;         // overrides the computed log term
  std::optional<double> total_steps;  // T, defaults to K * H
  int episodes = 1000;
  std::vector<std::uint64_t> seeds;
  std::string output_dir = "run";
  EvaluationFlags evaluation;
  bool gap_csv = true;
  int threads = 0;  // 0: NASHPLAY_THREADS or hardware concurrency
};

// Seeds may be given as a list or as {"base": b, "count": n}, the latter
// expanding to DeriveSeed(b, 0..n-1). Throws std::invalid_argument.
RunConfig ParseRunConfig(const nlohmann::json& doc);
// Canonical form; excludes output_dir and threads, which do not affect
// results.
nlohmann::json RunConfigToJson(const RunConfig& config);
std::uint64_t ConfigHash(const RunConfig& config);
std::string HashHex(std::uint64_t hash);
std::uint64_t Fnv1a64(std::string_view bytes);

// Applies "dotted.key=value"; value is parsed as JSON, falling back to a
// plain string.
void ApplyOverride(nlohmann::json& doc, std::string_view assignment);

MarkovGame BuildGame(const GameSpec& spec);
Hyperparams BuildHyperparams(const RunConfig& config, const MarkovGame& game);
int ResolveThreads(int requested);

// Trailing running mean over `window` entries (fewer at the start).
std::vector<double> RunningMean(std::span<const double> values, int window);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  int fit_start = 0;  // first k used (1-based)
  int fit_end = 0;
  int window = 1;
};
// curve[k-1] is the per-episode gap at episode k, already averaged over
// seeds. Smooths with window max(1, K/100) and fits log(gap) against log(k)
// for k >= K/10.
SlopeFit FitGapSlope(std::span<const double> curve);

// (1/k) sum_{j<=k} (upper_j - lower_j).
double AverageGap(std::span<const double> upper, std::span<const double> lower,
                  int k);

struct SeedResult {
  std::uint64_t seed = 0;
  std::vector<double> upper;
  std::vector<double> lower;
  double average_gap = 0.0;          // over all K episodes
  double quarter_average_gap = 0.0;  // over the first K/4 episodes
  std::optional<double> sandwich_fraction;
  nlohmann::json evaluation;  // null unless requested
};

struct RunReport {
  RunConfig config;
  std::uint64_t config_hash = 0;
  std::optional<double> v_star;
  std::vector<SeedResult> seeds;
  std::vector<double> mean_gap_curve;
  double mean_average_gap = 0.0;
  double mean_quarter_average_gap = 0.0;
  double gap_ratio = 0.0;
  SlopeFit slope;
  std::optional<double> sandwich_fraction;

  nlohmann::json SummaryJson() const;
};

// Runs every seed on a worker pool. With write_files, emits summary.json,
// config.json, gap.csv and per seed trace.jsonl and snapshot.bin under
// output_dir.
RunReport Train(const RunConfig& config, bool write_files);

// Evaluation of one stored run: oracle value and sandwich fraction, exact
// exploitability through the certified-policy trees, Monte Carlo
// exploitability. Deterministic in the snapshot and flags.
nlohmann::json EvaluateSnapshot(const Snapshot& snapshot,
                                const EvaluationFlags& flags);

// Reads the snapshot, writes evaluation.json next to it, replaces the
// evaluation line of the sibling trace.jsonl and updates the matching entry
// of ../summary.json when present. Re-running gives identical files.
nlohmann::json EvaluateSnapshotFile(const std::string& snapshot_path,
                                    const EvaluationFlags& flags);

}  // namespace nashplay

#endif  // NASHPLAY_HARNESS_H_
