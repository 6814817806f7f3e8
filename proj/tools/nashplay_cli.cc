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
// Command line driver: train, evaluate, oracle, bandit-bench, selftest.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nashplay/acceptance.h"
#include "nashplay/bandit_ftrl.h"
#include "nashplay/evaluation.h"
#include "nashplay/harness.h"
#include "nashplay/rng.h"
#include "nashplay/schedules.h"
#include "nashplay/version.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nashplay;

struct ConfigFlags {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out;
  int seeds = 0;
  std::string seed_list;
  int threads = 0;
};

void AddConfigFlags(CLI::App* app, ConfigFlags& flags, bool run_flags) {
  app->add_option("--config", flags.config_path, "JSON run config")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--set", flags.overrides,
                  "Override a config field, e.g. --set hyperparams.c=1.5");
  if (!run_flags) return;
  app->add_option("--out", flags.out, "Output directory");
  auto* seeds = app->add_option("--seeds", flags.seeds,
                                "Number of seeds derived from seeds.base")
                    ->check(CLI::PositiveNumber);
  app->add_option("--seed-list", flags.seed_list, "Explicit seeds a,b,c")
      ->excludes(seeds);
  app->add_option("--threads", flags.threads,
                  "Worker threads (default: NASHPLAY_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
}

json LoadConfig(const ConfigFlags& flags) {
  std::ifstream in(flags.config_path);
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    throw std::invalid_argument("cannot parse " + flags.config_path);
  }
  for (const auto& assignment : flags.overrides) ApplyOverride(doc, assignment);
  if (!flags.out.empty()) doc["output_dir"] = flags.out;
  if (flags.seeds > 0) {
    std::uint64_t base = 1;
    if (doc.contains("seeds") && doc["seeds"].is_object()) {
      base = doc["seeds"].value("base", std::uint64_t{1});
    }
    doc["seeds"] = {{"base", base}, {"count", flags.seeds}};
  }
  if (!flags.seed_list.empty()) {
    json list = json::array();
    std::stringstream stream(flags.seed_list);
    std::string item;
    while (std::getline(stream, item, ',')) list.push_back(std::stoull(item));
    doc["seeds"] = list;
  }
  if (flags.threads > 0) doc["threads"] = flags.threads;
  return doc;
}

int Train(const ConfigFlags& flags) {
  const RunConfig config = ParseRunConfig(LoadConfig(flags));
  const RunReport report = nashplay::Train(config, true);
  std::cout << "wrote " << (fs::path(config.output_dir) / "summary.json").string()
            << "\n"
            << "config_hash " << HashHex(report.config_hash) << "\n"
            << "mean_average_gap " << report.mean_average_gap << "\n"
            << "gap_ratio " << report.gap_ratio << "\n"
            << "slope " << report.slope.slope << "\n";
  if (report.v_star) {
    std::cout << "v_star " << *report.v_star << "\n"
              << "sandwich_fraction " << report.sandwich_fraction.value_or(0)
              << "\n";
  }
  return 0;
}

int Evaluate(const std::vector<std::string>& targets,
             const EvaluationFlags& flags) {
  std::vector<std::string> snapshots;
  for (const auto& target : targets) {
    const fs::path path(target);
    if (fs::is_directory(path)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(path)) {
        const fs::path candidate = entry.path() / "snapshot.bin";
        if (fs::exists(candidate)) found.push_back(candidate.string());
      }
      if (fs::exists(path / "snapshot.bin")) {
        found.push_back((path / "snapshot.bin").string());
      }
      std::sort(found.begin(), found.end());
      snapshots.insert(snapshots.end(), found.begin(), found.end());
    } else {
      snapshots.push_back(target);
    }
  }
  if (snapshots.empty()) throw std::invalid_argument("no snapshots found");
  for (const auto& snapshot : snapshots) {
    const json report = EvaluateSnapshotFile(snapshot, flags);
    std::cout << snapshot << " " << report.dump() << "\n";
    if (report.contains("exact") && report["exact"]["status"] == "overflow") {
      std::cerr << "nashplay: exact evaluation of " << snapshot
                << " overflowed; rerun with --mc N for a Monte Carlo estimate\n";
    }
  }
  return 0;
}

int Oracle(const ConfigFlags& flags) {
  const RunConfig config = ParseRunConfig(LoadConfig(flags));
  const MarkovGame game = BuildGame(config.game);
  const NashSolution solution = SolveMarkovGame(game);
  json values = json::array();
  for (int h = 0; h < game.horizon(); ++h) {
    json row = json::array();
    for (int s = 0; s < game.num_states(); ++s) {
      row.push_back(solution.values.V(h, s));
    }
    values.push_back(row);
  }
  auto policy_json = [&](const MarkovPolicy& policy) {
    json out = json::array();
    for (int h = 0; h < game.horizon(); ++h) {
      json rows = json::array();
      for (int s = 0; s < game.num_states(); ++s) {
        auto row = policy.row(h, s);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
      }
      out.push_back(rows);
    }
    return out;
  };
  const json out = {{"v_star", solution.values.V(0, game.initial_state())},
                    {"values", values},
                    {"max_policy", policy_json(solution.max_policy)},
                    {"min_policy", policy_json(solution.min_policy)},
                    {"bellman_residual",
                     BellmanResidual(game, solution.values)}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct BanditFlags {
  int arms = 2;
  int rounds = 2000;
  int trials = 100;
  std::string adversary = "stochastic";
  int weight_horizon = 2;
  double failure = 0.05;
  std::uint64_t seed = 1;
};

int BanditBench(const BanditFlags& flags) {
  const int A = flags.arms;
  std::vector<double> weights;
  LossOracle oracle;
  std::vector<double> means(A);
  for (int a = 0; a < A; ++a) {
    means[a] = A == 1 ? 0.5 : 0.2 + 0.6 * a / (A - 1);
  }
  if (flags.adversary == "stochastic") {
    weights = ComputeAlphaWeights(flags.rounds, flags.weight_horizon).weights;
    oracle = [means](int) { return means; };
  } else if (flags.adversary == "alternating") {
    weights.assign(flags.rounds, 1.0);
    oracle = [A](int t) {
      std::vector<double> l(A);
      for (int a = 0; a < A; ++a) l[a] = (t + a) % 2;
      return l;
    };
  } else {
    throw std::invalid_argument("unknown adversary " + flags.adversary);
  }
  const double iota = std::log(A * flags.rounds / flags.failure);
  const double bound = WeightedRegretBound(weights, A, iota);
  std::vector<double> regrets;
  int below = 0;
  for (int trial = 0; trial < flags.trials; ++trial) {
    Rng rng(DeriveSeed(flags.seed, trial));
    const BanditRun run = RunWeightedBandit(A, oracle, weights, rng);
    regrets.push_back(run.weighted_regret);
    if (run.weighted_regret < bound) ++below;
  }
  double mean = 0.0;
  for (double r : regrets) mean += r / regrets.size();
  const json out = {{"arms", A},
                    {"rounds", flags.rounds},
                    {"trials", flags.trials},
                    {"adversary", flags.adversary},
                    {"iota", iota},
                    {"bound", bound},
                    {"mean_regret", mean},
                    {"max_regret",
                     *std::max_element(regrets.begin(), regrets.end())},
                    {"fraction_below_bound",
                     static_cast<double>(below) / flags.trials}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int Selftest(bool smoke, bool as_json, bool corrupt_alpha,
             const std::vector<int>& only, int threads) {
  AcceptanceOptions options;
  options.smoke = smoke;
  options.threads = threads;
  options.only = std::set<int>(only.begin(), only.end());
  if (corrupt_alpha) {
    options.alpha = [](int t, int horizon) { return 2.0 * Alpha(t, horizon); };
  }
  const auto results = RunAcceptance(options);
  bool all = true;
  json out = json::array();
  for (const auto& result : results) {
    all = all && result.passed();
    if (as_json) {
      out.push_back(result.ToJson());
    } else {
      std::cout << result.Line() << std::endl;
    }
  }
  if (as_json) std::cout << out.dump(2) << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-play Nash equilibrium learning for tabular zero-sum "
               "Markov games"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ConfigFlags train_flags;
  auto* train = app.add_subcommand("train", "Run learners for every seed");
  AddConfigFlags(train, train_flags, true);

  std::vector<std::string> targets;
  EvaluationFlags eval_flags;
  bool no_oracle = false;
  long long mc_episodes = 0;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Evaluate snapshots (files, seed directories or run directories)");
  evaluate->add_option("targets", targets, "snapshot.bin or run directory")
      ->required();
  evaluate->add_flag("--exact", eval_flags.exact_exploitability,
                     "Exact exploitability through certified-policy trees");
  evaluate->add_option("--mc", mc_episodes,
                       "Monte Carlo exploitability with this many episodes")
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--max-support", eval_flags.max_support,
                       "Node budget for the exact trees");
  evaluate->add_flag("--no-oracle", no_oracle, "Skip the Nash value oracle");

  ConfigFlags oracle_flags;
  auto* oracle = app.add_subcommand("oracle", "Nash value and policies of a game");
  AddConfigFlags(oracle, oracle_flags, false);

  BanditFlags bandit_flags;
  auto* bandit = app.add_subcommand("bandit-bench",
                                    "Weighted-regret bandit experiment");
  bandit->add_option("--arms", bandit_flags.arms)->check(CLI::Range(2, 1000));
  bandit->add_option("--rounds", bandit_flags.rounds)->check(CLI::PositiveNumber);
  bandit->add_option("--trials", bandit_flags.trials)->check(CLI::PositiveNumber);
  bandit->add_option("--adversary", bandit_flags.adversary)
      ->check(CLI::IsMember({"stochastic", "alternating"}));
  bandit->add_option("--weight-horizon", bandit_flags.weight_horizon)
      ->check(CLI::PositiveNumber);
  bandit->add_option("--failure", bandit_flags.failure)
      ->check(CLI::Range(1e-9, 1.0));
  bandit->add_option("--seed", bandit_flags.seed);

  bool smoke = false, as_json = false, corrupt_alpha = false;
  std::vector<int> only;
  int selftest_threads = 0;
  auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
  selftest->add_flag("--smoke", smoke, "Reduced problem sizes");
  selftest->add_flag("--json", as_json, "Machine-readable output");
  selftest->add_flag("--corrupt-alpha", corrupt_alpha,
                     "Double the learning rate (mutation check)");
  selftest->add_option("--only", only, "Criterion ids")->delimiter(',');
  selftest->add_option("--threads", selftest_threads)
      ->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*train) return Train(train_flags);
    if (*evaluate) {
      eval_flags.oracle = !no_oracle;
      if (mc_episodes > 0) {
        eval_flags.mc_exploitability = true;
        eval_flags.mc_episodes = mc_episodes;
      }
      return Evaluate(targets, eval_flags);
    }
    if (*oracle) return Oracle(oracle_flags);
    if (*bandit) return BanditBench(bandit_flags);
    if (*selftest) {
      return Selftest(smoke, as_json, corrupt_alpha, only, selftest_threads);
    }
  } catch (const std::exception& e) {
    std::cerr << "nashplay: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
