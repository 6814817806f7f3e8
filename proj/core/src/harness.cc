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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "nashplay/evaluation.h"
#include "nashplay/game_io.h"
#include "nashplay/nash_q.h"
#include "nashplay/nash_v.h"
#include "nashplay/policy_tree.h"
#include "nashplay/rng.h"
#include "nashplay/version.h"

namespace nashplay {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kSandwichTolerance = 1e-9;
constexpr std::uint64_t kMcStream = 0x6d63;

void RejectUnknownKeys(const json& doc, const std::set<std::string>& allowed,
                       const std::string& where) {
  for (const auto& item : doc.items()) {
    if (!allowed.count(item.key())) {
      throw std::invalid_argument("unknown key '" + item.key() + "' in " +
                                  where);
    }
  }
}

template <typename T>
T Get(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key) || doc[key].is_null()) return fallback;
  try {
    return doc[key].get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("bad value for '") + key + "'");
  }
}

GameSpec ParseGameSpec(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("game must be an object");
  GameSpec spec;
  const int sources = doc.contains("generator") + doc.contains("file") +
                      doc.contains("inline");
  if (sources != 1) {
    throw std::invalid_argument(
        "game needs exactly one of generator, file, inline");
  }
  if (doc.contains("file")) {
    RejectUnknownKeys(doc, {"file"}, "game");
    spec.file = Get<std::string>(doc, "file", "");
    if (spec.file.empty()) throw std::invalid_argument("empty game file");
  } else if (doc.contains("inline")) {
    RejectUnknownKeys(doc, {"inline"}, "game");
    spec.inline_game = doc["inline"];
  } else {
    spec.generator = Get<std::string>(doc, "generator", "");
    if (spec.generator == "random") {
      RejectUnknownKeys(doc,
                        {"generator", "horizon", "states", "max_actions",
                         "min_actions", "seed"},
                        "game");
      spec.horizon = Get<int>(doc, "horizon", spec.horizon);
      spec.num_states = Get<int>(doc, "states", spec.num_states);
      spec.num_max_actions = Get<int>(doc, "max_actions", spec.num_max_actions);
      spec.num_min_actions = Get<int>(doc, "min_actions", spec.num_min_actions);
      spec.seed = Get<std::uint64_t>(doc, "seed", spec.seed);
      if (spec.horizon < 1 || spec.num_states < 1 || spec.num_max_actions < 1 ||
          spec.num_min_actions < 1) {
        throw std::invalid_argument("random game dimensions must be >= 1");
      }
    } else if (spec.generator == "parity") {
      RejectUnknownKeys(doc, {"generator", "n"}, "game");
      spec.parity_n = Get<int>(doc, "n", spec.parity_n);
      if (spec.parity_n < 1) throw std::invalid_argument("parity n must be >= 1");
    } else {
      throw std::invalid_argument("unknown generator '" + spec.generator + "'");
    }
  }
  return spec;
}

json GameSpecToJson(const GameSpec& spec) {
  if (!spec.file.empty()) return {{"file", spec.file}};
  if (!spec.inline_game.is_null()) return {{"inline", spec.inline_game}};
  if (spec.generator == "parity") {
    return {{"generator", "parity"}, {"n", spec.parity_n}};
  }
  return {{"generator", spec.generator},
          {"horizon", spec.horizon},
          {"states", spec.num_states},
          {"max_actions", spec.num_max_actions},
          {"min_actions", spec.num_min_actions},
          {"seed", spec.seed}};
}

std::string SeedDir(std::uint64_t seed) {
  return "seed_" + std::to_string(seed);
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string FormatDouble(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

double SandwichFraction(const std::vector<double>& upper,
                        const std::vector<double>& lower, double v_star) {
  std::size_t inside = 0;
  for (std::size_t i = 0; i < upper.size(); ++i) {
    if (upper[i] >= v_star - kSandwichTolerance &&
        lower[i] <= v_star + kSandwichTolerance) {
      ++inside;
    }
  }
  return upper.empty() ? 1.0 : static_cast<double>(inside) / upper.size();
}

// Certified policies of both sides of a stored run.
struct CertifiedPair {
  std::unique_ptr<CertifiedPolicy> mu;
  std::unique_ptr<CertifiedPolicy> nu;
};

CertifiedPair MakeCertifiedPair(const Snapshot& snapshot) {
  CertifiedPair pair;
  if (snapshot.q) {
    pair.mu = std::make_unique<NashQCertifiedPolicy>(*snapshot.q, Side::kMax);
    pair.nu = std::make_unique<NashQCertifiedPolicy>(*snapshot.q, Side::kMin);
  } else if (snapshot.v) {
    pair.mu = std::make_unique<NashVCertifiedPolicy>(*snapshot.v, Side::kMax);
    pair.nu = std::make_unique<NashVCertifiedPolicy>(*snapshot.v, Side::kMin);
  } else {
    throw std::invalid_argument("snapshot holds no history");
  }
  return pair;
}

// Markov policy in force after the last episode.
MarkovPolicy FinalPolicy(const CertifiedPolicy& policy) {
  const MarkovGame& game = policy.game();
  const int n = policy.num_actions();
  std::vector<double> probs;
  probs.reserve(static_cast<std::size_t>(game.horizon()) * game.num_states() *
                n);
  for (int h = 0; h < game.horizon(); ++h) {
    for (int s = 0; s < game.num_states(); ++s) {
      auto row = policy.ActionProbs(h, s, policy.episodes() + 1);
      probs.insert(probs.end(), row.begin(), row.end());
    }
  }
  return MarkovPolicy(policy.side(), game.horizon(), game.num_states(), n,
                      std::move(probs));
}

json TraceHeader(const SnapshotHeader& header, std::uint64_t seed,
                 int episodes) {
  return {{"type", "header"},
          {"version", header.version},
          {"config_hash", HashHex(header.config_hash)},
          {"algorithm", AlgorithmName(header.algorithm)},
          {"seed", seed},
          {"episodes", episodes}};
}

json EvaluationLine(const json& report) {
  return {{"type", "evaluation"}, {"report", report}};
}

std::string TraceText(const SnapshotHeader& header, std::uint64_t seed,
                      const std::vector<double>& upper,
                      const std::vector<double>& lower,
                      const std::vector<Trajectory>& trajectories,
                      const json& evaluation) {
  std::string out = TraceHeader(header, seed, upper.size()).dump() + "\n";
  for (std::size_t i = 0; i < upper.size(); ++i) {
    json visited = json::array();
    const auto& steps = trajectories[i].steps;
    for (std::size_t h = 0; h < steps.size(); ++h) {
      visited.push_back({h, steps[h].state, steps[h].max_action,
                         steps[h].min_action});
    }
    json line = {{"k", i + 1},
                 {"Vup1", upper[i]},
                 {"Vlow1", lower[i]},
                 {"visited", std::move(visited)}};
    out += line.dump();
    out += '\n';
  }
  if (!evaluation.is_null()) out += EvaluationLine(evaluation).dump() + "\n";
  return out;
}

bool WantsEvaluation(const EvaluationFlags& flags) {
  return flags.exact_exploitability || flags.mc_exploitability;
}

}  // namespace

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string HashHex(std::uint64_t hash) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

RunConfig ParseRunConfig(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config must be an object");
  RejectUnknownKeys(doc,
                    {"game", "algorithm", "hyperparams", "episodes", "seeds",
                     "output_dir", "evaluation", "gap_csv", "threads"},
                    "config");
  RunConfig config;
  if (!doc.contains("game")) throw std::invalid_argument("config needs game");
  config.game = ParseGameSpec(doc["game"]);
  config.algorithm =
      ParseAlgorithm(Get<std::string>(doc, "algorithm", "nash_q"));
  if (doc.contains("hyperparams")) {
    const json& hp = doc["hyperparams"];
    RejectUnknownKeys(hp, {"c", "p", "iota", "total_steps"}, "hyperparams");
    config.c = Get<double>(hp, "c", config.c);
    config.p = Get<double>(hp, "p", config.p);
    if (hp.contains("iota") && !hp["iota"].is_null()) {
      config.iota = Get<double>(hp, "iota", 0.0);
    }
    if (hp.contains("total_steps") && !hp["total_steps"].is_null()) {
      config.total_steps = Get<double>(hp, "total_steps", 0.0);
    }
  }
  config.episodes = Get<int>(doc, "episodes", config.episodes);
  if (config.episodes < 1) throw std::invalid_argument("episodes must be >= 1");

  const json seeds = doc.value("seeds", json{{"base", 1}, {"count", 1}});
  if (seeds.is_array()) {
    for (const auto& seed : seeds) {
      if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
        throw std::invalid_argument("seeds must be nonnegative integers");
      }
      config.seeds.push_back(seed.get<std::uint64_t>());
    }
  } else if (seeds.is_object()) {
    RejectUnknownKeys(seeds, {"base", "count"}, "seeds");
    const auto base = Get<std::uint64_t>(seeds, "base", 1);
    const int count = Get<int>(seeds, "count", 1);
    for (int i = 0; i < count; ++i) config.seeds.push_back(DeriveSeed(base, i));
  } else {
    throw std::invalid_argument("seeds must be a list or {base, count}");
  }
  if (config.seeds.empty()) throw std::invalid_argument("no seeds");
  if (std::set<std::uint64_t>(config.seeds.begin(), config.seeds.end())
          .size() != config.seeds.size()) {
    throw std::invalid_argument("duplicate seeds");
  }

  config.output_dir = Get<std::string>(doc, "output_dir", config.output_dir);
  if (doc.contains("evaluation")) {
    const json& ev = doc["evaluation"];
    RejectUnknownKeys(ev,
                      {"oracle", "exact_exploitability", "mc_exploitability",
                       "mc_episodes", "max_support"},
                      "evaluation");
    auto& flags = config.evaluation;
    flags.oracle = Get<bool>(ev, "oracle", flags.oracle);
    flags.exact_exploitability =
        Get<bool>(ev, "exact_exploitability", flags.exact_exploitability);
    flags.mc_exploitability =
        Get<bool>(ev, "mc_exploitability", flags.mc_exploitability);
    flags.mc_episodes = Get<long long>(ev, "mc_episodes", flags.mc_episodes);
    flags.max_support = Get<std::size_t>(ev, "max_support", flags.max_support);
    if (flags.mc_episodes < 1) throw std::invalid_argument("mc_episodes < 1");
  }
  config.gap_csv = Get<bool>(doc, "gap_csv", config.gap_csv);
  config.threads = Get<int>(doc, "threads", config.threads);
  if (config.threads < 0) throw std::invalid_argument("threads must be >= 0");
  return config;
}

json RunConfigToJson(const RunConfig& config) {
  const auto& flags = config.evaluation;
  return {{"game", GameSpecToJson(config.game)},
          {"algorithm", AlgorithmName(config.algorithm)},
          {"hyperparams",
           {{"c", config.c},
            {"p", config.p},
            {"iota", config.iota ? json(*config.iota) : json(nullptr)},
            {"total_steps",
             config.total_steps ? json(*config.total_steps) : json(nullptr)}}},
          {"episodes", config.episodes},
          {"seeds", config.seeds},
          {"evaluation",
           {{"oracle", flags.oracle},
            {"exact_exploitability", flags.exact_exploitability},
            {"mc_exploitability", flags.mc_exploitability},
            {"mc_episodes", flags.mc_episodes},
            {"max_support", flags.max_support}}},
          {"gap_csv", config.gap_csv}};
}

std::uint64_t ConfigHash(const RunConfig& config) {
  return Fnv1a64(RunConfigToJson(config).dump());
}

void ApplyOverride(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw std::invalid_argument("override must look like key.path=value");
  }
  const std::string path(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw std::invalid_argument("empty key in " + path);
    if (!node->is_object()) *node = json::object();
    if (dot == std::string::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

MarkovGame BuildGame(const GameSpec& spec) {
  auto checked = [](MarkovGame game) {
    const auto issues = ValidateGame(game);
    if (!issues.empty()) {
      throw std::invalid_argument("invalid game: " + issues.front().message);
    }
    return game;
  };
  if (!spec.file.empty()) return checked(ReadGameFile(spec.file));
  if (!spec.inline_game.is_null()) {
    return checked(GameFromJson(spec.inline_game));
  }
  if (spec.generator == "parity") return MakeParityGame(spec.parity_n);
  if (spec.generator == "random") {
    Rng rng(spec.seed);
    return MakeRandomGame(spec.horizon, spec.num_states, spec.num_max_actions,
                          spec.num_min_actions, rng);
  }
  throw std::invalid_argument("game spec has no source");
}

Hyperparams BuildHyperparams(const RunConfig& config, const MarkovGame& game) {
  Hyperparams hp =
      Hyperparams::For(game, config.episodes, config.c, config.p,
                       config.total_steps);
  if (config.iota) hp.iota = *config.iota;
  hp.Validate();
  return hp;
}

int ResolveThreads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NASHPLAY_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> RunningMean(std::span<const double> values, int window) {
  if (window < 1) throw std::invalid_argument("RunningMean: window < 1");
  std::vector<double> out(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i];
    if (i >= static_cast<std::size_t>(window)) sum -= values[i - window];
    out[i] = sum / static_cast<double>(std::min<std::size_t>(i + 1, window));
  }
  return out;
}

SlopeFit FitGapSlope(std::span<const double> curve) {
  const int K = static_cast<int>(curve.size());
  SlopeFit fit;
  if (K < 2) return fit;
  fit.window = std::max(1, K / 100);
  const auto smooth = RunningMean(curve, fit.window);
  fit.fit_start = std::max(1, K / 10);
  fit.fit_end = K;
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = fit.fit_start; k <= K; ++k) {
    const double y = smooth[k - 1];
    if (!(y > 0.0)) continue;
    const double x = std::log(static_cast<double>(k));
    const double ly = std::log(y);
    n += 1;
    sx += x;
    sy += ly;
    sxx += x * x;
    sxy += x * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (n < 2 || denom == 0.0) return fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

double AverageGap(std::span<const double> upper, std::span<const double> lower,
                  int k) {
  if (k < 1 || k > static_cast<int>(upper.size()) ||
      upper.size() != lower.size()) {
    throw std::invalid_argument("AverageGap: bad prefix length");
  }
  double sum = 0.0;
  for (int i = 0; i < k; ++i) sum += upper[i] - lower[i];
  return sum / k;
}

json RunReport::SummaryJson() const {
  json per_seed = json::array();
  for (const auto& seed : seeds) {
    json entry = {{"seed", seed.seed},
                  {"average_gap", seed.average_gap},
                  {"quarter_average_gap", seed.quarter_average_gap},
                  {"trace", SeedDir(seed.seed) + "/trace.jsonl"},
                  {"snapshot", SeedDir(seed.seed) + "/snapshot.bin"}};
    entry["sandwich_fraction"] =
        seed.sandwich_fraction ? json(*seed.sandwich_fraction) : json(nullptr);
    if (!seed.evaluation.is_null()) entry["evaluation"] = seed.evaluation;
    per_seed.push_back(std::move(entry));
  }
  return {{"version", kVersion},
          {"config_hash", HashHex(config_hash)},
          {"config", RunConfigToJson(config)},
          {"algorithm", AlgorithmName(config.algorithm)},
          {"episodes", config.episodes},
          {"v_star", v_star ? json(*v_star) : json(nullptr)},
          {"mean_average_gap", mean_average_gap},
          {"mean_quarter_average_gap", mean_quarter_average_gap},
          {"gap_ratio", gap_ratio},
          {"slope",
           {{"value", slope.slope},
            {"intercept", slope.intercept},
            {"fit_start", slope.fit_start},
            {"fit_end", slope.fit_end},
            {"window", slope.window}}},
          {"sandwich_fraction",
           sandwich_fraction ? json(*sandwich_fraction) : json(nullptr)},
          {"per_seed", std::move(per_seed)},
          {"files",
           {{"config", "config.json"},
            {"gap_csv", config.gap_csv ? json("gap.csv") : json(nullptr)}}}};
}

json EvaluateSnapshot(const Snapshot& snapshot, const EvaluationFlags& flags) {
  const MarkovGame& game = snapshot.q ? snapshot.q->game : snapshot.v->game;
  const auto& upper = snapshot.q ? snapshot.q->upper_trace
                                 : snapshot.v->upper_trace;
  const auto& lower = snapshot.q ? snapshot.q->lower_trace
                                 : snapshot.v->lower_trace;
  const int K = static_cast<int>(upper.size());
  json report = {{"version", kVersion},
                 {"config_hash", HashHex(snapshot.header.config_hash)},
                 {"algorithm", AlgorithmName(snapshot.header.algorithm)},
                 {"episodes", K},
                 {"average_gap", K > 0 ? AverageGap(upper, lower, K) : 0.0}};
  if (flags.oracle) {
    const double v_star = NashValueOracle(game).V(0, game.initial_state());
    report["oracle"] = {{"v_star", v_star},
                        {"sandwich_fraction",
                         SandwichFraction(upper, lower, v_star)}};
  }
  const CertifiedPair pair = MakeCertifiedPair(snapshot);
  std::optional<PolicyTree> tree_mu, tree_nu;
  std::optional<Exploitability> exact;
  if (flags.exact_exploitability) {
    try {
      tree_mu = BuildPolicyTree(*pair.mu, flags.max_support);
      tree_nu = BuildPolicyTree(*pair.nu, flags.max_support);
      exact = ExploitabilityExact(game, *tree_mu, *tree_nu);
      report["exact"] = {
          {"status", "ok"},
          {"exploitability", exact->exploitability},
          {"max_response_value", exact->max_response_value},
          {"min_response_value", exact->min_response_value},
          {"pair_value", TreePairValue(game, *tree_mu, *tree_nu)},
          {"tree_nodes",
           {{"max", tree_mu->nodes.size()}, {"min", tree_nu->nodes.size()}}}};
    } catch (const SupportOverflow& e) {
      tree_mu.reset();
      tree_nu.reset();
      report["exact"] = {
          {"status", "overflow"},
          {"message", e.what()},
          {"suggestion",
           "raise evaluation.max_support or use evaluation.mc_exploitability"}};
    }
  }
  if (flags.mc_exploitability) {
    Rng rng(snapshot.header.config_hash, kMcStream);
    CertifiedPolicyActor mu_actor(*pair.mu), nu_actor(*pair.nu);
    McEstimate estimate;
    std::string responders;
    if (exact) {
      TreeResponseActor max_response(*tree_nu, exact->max_response);
      TreeResponseActor min_response(*tree_mu, exact->min_response);
      estimate = ExploitabilityMc(game, mu_actor, nu_actor, max_response,
                                  min_response, flags.mc_episodes, rng);
      responders = "tree_best_response";
    } else {
      const BestResponse to_nu = BestResponseToMarkov(game, FinalPolicy(*pair.nu));
      const BestResponse to_mu = BestResponseToMarkov(game, FinalPolicy(*pair.mu));
      MarkovPolicyActor max_response(to_nu.response);
      MarkovPolicyActor min_response(to_mu.response);
      estimate = ExploitabilityMc(game, mu_actor, nu_actor, max_response,
                                  min_response, flags.mc_episodes, rng);
      responders = "markov_best_response_to_final_policy";
    }
    report["mc"] = {{"estimate", estimate.mean},
                    {"std_error", estimate.std_error},
                    {"episodes", estimate.episodes},
                    {"responders", responders},
                    {"note", "lower bound on exploitability"}};
  }
  return report;
}

json EvaluateSnapshotFile(const std::string& snapshot_path,
                          const EvaluationFlags& flags) {
  const Snapshot snapshot = ReadSnapshot(snapshot_path);
  const json report = EvaluateSnapshot(snapshot, flags);
  const fs::path dir = fs::path(snapshot_path).parent_path();
  WriteFile(dir / "evaluation.json", report.dump(2) + "\n");

  const fs::path trace_path = dir / "trace.jsonl";
  if (fs::exists(trace_path)) {
    std::istringstream in(ReadFile(trace_path));
    std::string kept, line;
    while (std::getline(in, line)) {
      if (line.find("\"type\":\"evaluation\"") != std::string::npos) continue;
      kept += line;
      kept += '\n';
    }
    kept += EvaluationLine(report).dump() + "\n";
    WriteFile(trace_path, kept);
  }

  const fs::path summary_path = dir.parent_path() / "summary.json";
  if (fs::exists(summary_path)) {
    json summary = json::parse(ReadFile(summary_path));
    const std::string key =
        dir.filename().string() + "/" + fs::path(snapshot_path).filename().string();
    for (auto& entry : summary["per_seed"]) {
      if (entry.value("snapshot", "") == key) entry["evaluation"] = report;
    }
    WriteFile(summary_path, summary.dump(2) + "\n");
  }
  return report;
}

RunReport Train(const RunConfig& config, bool write_files) {
  const MarkovGame game = BuildGame(config.game);
  const Hyperparams hp = BuildHyperparams(config, game);
  RunReport report;
  report.config = config;
  report.config_hash = ConfigHash(config);
  if (config.evaluation.oracle) {
    report.v_star = NashValueOracle(game).V(0, game.initial_state());
  }
  const SnapshotHeader header{config.algorithm, report.config_hash, kVersion};
  const fs::path out_dir(config.output_dir);
  if (write_files) fs::create_directories(out_dir);

  const int n = static_cast<int>(config.seeds.size());
  const int K = config.episodes;
  const int quarter = std::max(1, K / 4);
  report.seeds.resize(n);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto run_seed = [&](int index) {
    SeedResult& result = report.seeds[index];
    result.seed = config.seeds[index];
    Rng rng(result.seed);
    Snapshot snapshot;
    snapshot.header = header;
    std::string bytes;
    const std::vector<Trajectory>* trajectories = nullptr;
    if (config.algorithm == Algorithm::kNashQ) {
      snapshot.q.emplace(RunNashQ(game, hp, K, rng));
      result.upper = snapshot.q->upper_trace;
      result.lower = snapshot.q->lower_trace;
      trajectories = &snapshot.q->trajectories;
      if (write_files) bytes = SerializeSnapshot(header, *snapshot.q);
    } else {
      snapshot.v.emplace(RunNashV(game, hp, K, rng));
      result.upper = snapshot.v->upper_trace;
      result.lower = snapshot.v->lower_trace;
      trajectories = &snapshot.v->trajectories;
      if (write_files) bytes = SerializeSnapshot(header, *snapshot.v);
    }
    result.average_gap = AverageGap(result.upper, result.lower, K);
    result.quarter_average_gap = AverageGap(result.upper, result.lower, quarter);
    if (report.v_star) {
      result.sandwich_fraction =
          SandwichFraction(result.upper, result.lower, *report.v_star);
    }
    if (WantsEvaluation(config.evaluation)) {
      result.evaluation = EvaluateSnapshot(snapshot, config.evaluation);
    }
    if (write_files) {
      const fs::path dir = out_dir / SeedDir(result.seed);
      fs::create_directories(dir);
      WriteFile(dir / "trace.jsonl",
                TraceText(header, result.seed, result.upper, result.lower,
                          *trajectories, result.evaluation));
      WriteSnapshot((dir / "snapshot.bin").string(), bytes);
      if (!result.evaluation.is_null()) {
        WriteFile(dir / "evaluation.json", result.evaluation.dump(2) + "\n");
      }
    }
  };

  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        run_seed(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::min(ResolveThreads(config.threads), n);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& thread : pool) thread.join();
  if (failure) std::rethrow_exception(failure);

  report.mean_gap_curve.assign(K, 0.0);
  std::vector<double> min_gap(K, INFINITY), max_gap(K, -INFINITY);
  double fraction_sum = 0.0;
  for (const auto& seed : report.seeds) {
    for (int k = 0; k < K; ++k) {
      const double gap = seed.upper[k] - seed.lower[k];
      report.mean_gap_curve[k] += gap / n;
      min_gap[k] = std::min(min_gap[k], gap);
      max_gap[k] = std::max(max_gap[k], gap);
    }
    report.mean_average_gap += seed.average_gap / n;
    report.mean_quarter_average_gap += seed.quarter_average_gap / n;
    if (seed.sandwich_fraction) fraction_sum += *seed.sandwich_fraction;
  }
  report.gap_ratio = report.mean_quarter_average_gap > 0.0
                         ? report.mean_average_gap /
                               report.mean_quarter_average_gap
                         : 0.0;
  report.slope = FitGapSlope(report.mean_gap_curve);
  if (report.v_star) report.sandwich_fraction = fraction_sum / n;

  if (write_files) {
    const json config_doc = {{"version", kVersion},
                             {"config_hash", HashHex(report.config_hash)},
                             {"config", RunConfigToJson(config)}};
    WriteFile(out_dir / "config.json", config_doc.dump(2) + "\n");
    if (config.gap_csv) {
      std::string csv = "# " + std::string(kVersion) +
                        " config_hash=" + HashHex(report.config_hash) + "\n";
      csv += "k,mean_gap,min_gap,max_gap\n";
      for (int k = 0; k < K; ++k) {
        csv += std::to_string(k + 1) + "," +
               FormatDouble(report.mean_gap_curve[k]) + "," +
               FormatDouble(min_gap[k]) + "," + FormatDouble(max_gap[k]) +
               "\n";
      }
      WriteFile(out_dir / "gap.csv", csv);
    }
    WriteFile(out_dir / "summary.json", report.SummaryJson().dump(2) + "\n");
  }
  return report;
}

}  // namespace nashplay
