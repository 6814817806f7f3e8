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
#include "nashplay/acceptance.h"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "nashplay/bandit_ftrl.h"
#include "nashplay/evaluation.h"
#include "nashplay/game.h"
#include "nashplay/harness.h"
#include "nashplay/matrix_game.h"
#include "nashplay/nash_q.h"
#include "nashplay/nash_v.h"
#include "nashplay/policy_tree.h"
#include "nashplay/rng.h"
#include "nashplay/schedules.h"

namespace nashplay {
namespace fs = std::filesystem;

namespace {

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

std::string Num(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4g", value);
  return buffer;
}

CriterionResult NewCriterion(int id, std::string name, double time_limit) {
  CriterionResult result;
  result.id = id;
  result.name = std::move(name);
  result.time_limit = time_limit;
  return result;
}

void Finish(CriterionResult& result, const Stopwatch& watch) {
  result.seconds = watch.Seconds();
  result.within_time = result.seconds <= result.time_limit;
}

std::vector<double> RandomSimplex(int n, Rng& rng) {
  std::vector<double> p(n);
  double total = 0.0;
  for (double& x : p) total += (x = rng.Exponential());
  for (double& x : p) x /= total;
  return p;
}

MarkovPolicy RandomMarkovPolicy(Side side, const MarkovGame& game, Rng& rng) {
  std::vector<double> probs;
  for (int h = 0; h < game.horizon(); ++h) {
    for (int s = 0; s < game.num_states(); ++s) {
      auto row = RandomSimplex(game.num_actions(side), rng);
      probs.insert(probs.end(), row.begin(), row.end());
    }
  }
  return MarkovPolicy(side, game.horizon(), game.num_states(),
                      game.num_actions(side), std::move(probs));
}

// Value of (mu, nu) by pushing the state distribution forward; nu_action or
// mu_action (one of them) selects a deterministic response per (h, s).
double ForwardValue(const MarkovGame& game, const MarkovPolicy& fixed,
                    const std::vector<int>& response) {
  const int S = game.num_states();
  std::vector<double> dist(S, 0.0);
  dist[game.initial_state()] = 1.0;
  double value = 0.0;
  for (int h = 0; h < game.horizon(); ++h) {
    std::vector<double> next(S, 0.0);
    for (int s = 0; s < S; ++s) {
      if (dist[s] == 0.0) continue;
      auto row = fixed.row(h, s);
      const int x = response[h * S + s];
      for (int y = 0; y < fixed.num_actions(); ++y) {
        const int a = fixed.side() == Side::kMax ? y : x;
        const int b = fixed.side() == Side::kMax ? x : y;
        const double p = dist[s] * row[y];
        value += p * game.reward(h, s, a, b);
        auto ns = game.next_state_distribution(h, s, a, b);
        for (int s2 = 0; s2 < S; ++s2) next[s2] += p * ns[s2];
      }
    }
    dist = std::move(next);
  }
  return value;
}

// Exact rationals for the support-enumeration oracle.
struct Fraction {
  long long num = 0;
  long long den = 1;

  Fraction(long long n = 0, long long d = 1) : num(n), den(d) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  double ToDouble() const { return static_cast<double>(num) / den; }
};
Fraction operator+(Fraction x, Fraction y) {
  return {x.num * y.den + y.num * x.den, x.den * y.den};
}
Fraction operator-(Fraction x, Fraction y) {
  return {x.num * y.den - y.num * x.den, x.den * y.den};
}
Fraction operator*(Fraction x, Fraction y) {
  return {x.num * y.num, x.den * y.den};
}
Fraction operator/(Fraction x, Fraction y) {
  return {x.num * y.den, x.den * y.num};
}
bool operator<(Fraction x, Fraction y) {
  return x.num * y.den < y.num * x.den;
}

// Value of an integer matrix game by enumerating square supports: every
// matrix game with positive entries has an optimal pair supported on a
// nonsingular square submatrix.
Fraction SupportEnumerationValue(const std::vector<std::vector<int>>& m) {
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  auto entry = [&](int i, int j) { return Fraction(m[i][j] + 1); };
  for (int k = 1; k <= std::min(rows, cols); ++k) {
    std::vector<int> rsel(rows, 0), csel(cols, 0);
    std::fill(rsel.end() - k, rsel.end(), 1);
    do {
      std::fill(csel.begin(), csel.end(), 0);
      std::fill(csel.end() - k, csel.end(), 1);
      do {
        std::vector<int> R, C;
        for (int i = 0; i < rows; ++i) {
          if (rsel[i]) R.push_back(i);
        }
        for (int j = 0; j < cols; ++j) {
          if (csel[j]) C.push_back(j);
        }
        // Inverse of the k x k block (k <= 2).
        std::vector<std::vector<Fraction>> inv(k, std::vector<Fraction>(k));
        if (k == 1) {
          inv[0][0] = Fraction(1) / entry(R[0], C[0]);
        } else {
          const Fraction a = entry(R[0], C[0]), b = entry(R[0], C[1]);
          const Fraction c = entry(R[1], C[0]), d = entry(R[1], C[1]);
          const Fraction det = a * d - b * c;
          if (det.num == 0) continue;
          inv = {{d / det, Fraction(0) - b / det},
                 {Fraction(0) - c / det, a / det}};
        }
        Fraction total(0);
        for (int i = 0; i < k; ++i) {
          for (int j = 0; j < k; ++j) total = total + inv[i][j];
        }
        if (total.num == 0) continue;
        const Fraction v = Fraction(1) / total;
        std::vector<Fraction> x(k), y(k);
        bool nonnegative = true;
        for (int i = 0; i < k; ++i) {
          Fraction row_sum(0), col_sum(0);
          for (int j = 0; j < k; ++j) {
            col_sum = col_sum + inv[j][i];
            row_sum = row_sum + inv[i][j];
          }
          x[i] = v * col_sum;
          y[i] = v * row_sum;
          if (x[i] < Fraction(0) || y[i] < Fraction(0)) nonnegative = false;
        }
        if (!nonnegative) continue;
        bool optimal = true;
        for (int j = 0; j < cols && optimal; ++j) {
          Fraction payoff(0);
          for (int i = 0; i < k; ++i) payoff = payoff + x[i] * entry(R[i], j);
          if (payoff < v) optimal = false;
        }
        for (int i = 0; i < rows && optimal; ++i) {
          Fraction payoff(0);
          for (int j = 0; j < k; ++j) payoff = payoff + entry(i, C[j]) * y[j];
          if (v < payoff) optimal = false;
        }
        if (optimal) return v - Fraction(1);
      } while (std::next_permutation(csel.begin(), csel.end()));
    } while (std::next_permutation(rsel.begin(), rsel.end()));
  }
  throw std::logic_error("support enumeration found no solution");
}

// alpha_t^i for i = 1..t straight from the product definition.
std::vector<double> DirectAlphaWeights(int t, int horizon) {
  std::vector<double> w(t);
  for (int i = 1; i <= t; ++i) {
    double value = (horizon + 1.0) / (horizon + i);
    for (int j = i + 1; j <= t; ++j) value *= 1.0 - (horizon + 1.0) / (horizon + j);
    w[i - 1] = value;
  }
  return w;
}

// Return of a deterministic max policy against the parity opponent with a
// fixed draw.
double ParityOracleReward(int n, const MarkovGame& game, const MarkovPolicy& mu,
                          const std::vector<int>& x, int label) {
  int s = game.initial_state();
  double total = 0.0;
  for (int h = 0; h <= n; ++h) {
    auto row = mu.row(h, s);
    const int a = static_cast<int>(std::max_element(row.begin(), row.end()) -
                                   row.begin());
    const int b = h < n ? x[h] : label;
    total += game.reward(h, s, a, b);
    auto next = game.next_state_distribution(h, s, a, b);
    s = static_cast<int>(std::max_element(next.begin(), next.end()) -
                         next.begin());
  }
  return total;
}

std::string ReadAll(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Relative paths and contents of every regular file under root.
std::vector<std::pair<std::string, std::string>> DirectoryContents(
    const fs::path& root) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      files.emplace_back(fs::relative(entry.path(), root).string(),
                         ReadAll(entry.path()));
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

bool CriterionResult::passed() const {
  return within_time && !checks.empty() &&
         std::all_of(checks.begin(), checks.end(),
                     [](const SubCheck& c) { return c.passed; });
}

std::string CriterionResult::Line() const {
  std::string line = passed() ? "PASS" : "FAIL";
  line += "  " + std::to_string(id) + " " + name + "  " + Num(seconds) +
          "s/" + Num(time_limit) + "s";
  for (const auto& check : checks) {
    line += "  " + check.name + "=" + (check.passed ? "ok" : "FAILED");
    if (!check.detail.empty()) line += "(" + check.detail + ")";
  }
  if (!within_time) line += "  over time limit";
  return line;
}

nlohmann::json CriterionResult::ToJson() const {
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& check : checks) {
    checks_json.push_back(
        {{"name", check.name}, {"passed", check.passed}, {"detail", check.detail}});
  }
  return {{"id", id},
          {"name", name},
          {"passed", passed()},
          {"seconds", seconds},
          {"time_limit", time_limit},
          {"checks", checks_json}};
}

CriterionResult CheckScheduleIdentities(const AlphaSchedule& alpha) {
  Stopwatch watch;
  CriterionResult result = NewCriterion(1, "schedule_identities", 5.0);
  constexpr int kMaxT = 2000;
  constexpr int kTruncation = 100000;
  constexpr int kTailIndices = 10;
  double sum_err = 0.0;
  int sqrt_bad = 0, max_bad = 0, sq_bad = 0;
  for (int H : {1, 2, 5}) {
    std::vector<double> w;
    double alpha0 = 1.0;
    for (int t = 1; t <= kMaxT; ++t) {
      const double at = alpha(t, H);
      for (double& x : w) x *= 1.0 - at;
      w.push_back(at);
      alpha0 *= 1.0 - at;
      double total = 0.0, inv_sqrt = 0.0, largest = 0.0, squares = 0.0;
      for (int i = 1; i <= t; ++i) {
        total += w[i - 1];
        inv_sqrt += w[i - 1] / std::sqrt(static_cast<double>(i));
        largest = std::max(largest, w[i - 1]);
        squares += w[i - 1] * w[i - 1];
      }
      sum_err = std::max(sum_err, std::abs(total + alpha0 - 1.0));
      const double root = std::sqrt(static_cast<double>(t));
      if (inv_sqrt < 1.0 / root * (1 - 1e-12) ||
          inv_sqrt > 2.0 / root * (1 + 1e-12)) {
        ++sqrt_bad;
      }
      if (largest > 2.0 * H / t * (1 + 1e-12)) ++max_bad;
      if (squares > 2.0 * H / t * (1 + 1e-12)) ++sq_bad;
    }
  }
  result.checks.push_back({"weights_sum_to_one", sum_err <= 1e-12,
                           "max_err=" + Num(sum_err)});
  result.checks.push_back({"inverse_sqrt_bounds", sqrt_bad == 0,
                           std::to_string(sqrt_bad) + " violations"});
  result.checks.push_back({"max_weight_bound", max_bad == 0,
                           std::to_string(max_bad) + " violations"});
  result.checks.push_back({"square_sum_bound", sq_bad == 0,
                           std::to_string(sq_bad) + " violations"});
  for (int H : {1, 2, 5}) {
    double worst = 0.0;
    for (int i = 1; i <= kTailIndices; ++i) {
      double weight = alpha(i, H);
      double total = 0.0;
      for (int t = i; t <= kTruncation; ++t) {
        if (t > i) weight *= 1.0 - alpha(t, H);
        total += weight;
      }
      worst = std::max(worst, std::abs(total - (1.0 + 1.0 / H)));
    }
    result.checks.push_back({"tail_sum_H" + std::to_string(H), worst <= 1e-6,
                             "max_err=" + Num(worst)});
  }
  Finish(result, watch);
  return result;
}

CriterionResult CheckCce(bool) {
  Stopwatch watch;
  CriterionResult result = NewCriterion(2, "cce_correctness", 5.0);
  Rng rng(2);
  double worst_violation = -INFINITY, worst_nash = 0.0, worst_simplex = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int A = 2 + rng.UniformInt(3);
    const int B = 2 + rng.UniformInt(3);
    Matrix upper(A, B), lower(A, B);
    for (int a = 0; a < A; ++a) {
      for (int b = 0; b < B; ++b) {
        upper(a, b) = 3.0 * rng.Uniform();
        lower(a, b) = trial % 2 == 0 ? upper(a, b) - rng.Uniform()
                                     : 3.0 * rng.Uniform();
      }
    }
    const JointDistribution pi = ComputeCce(upper, lower);
    worst_violation = std::max(worst_violation, CceViolation(upper, lower, pi));
    double total = 0.0;
    for (double p : pi.probs()) {
      total += p;
      worst_simplex = std::max(worst_simplex, -p);
    }
    worst_simplex = std::max(worst_simplex, std::abs(total - 1.0));
    const JointDistribution same = ComputeCce(upper, upper);
    const auto [mu, nu] = CceMarginals(same);
    worst_nash = std::max(worst_nash, ZeroSumExploitability(upper, mu, nu));
  }
  result.checks.push_back({"deviation_constraints", worst_violation <= 1e-8,
                           "max_violation=" + Num(worst_violation)});
  result.checks.push_back({"joint_simplex", worst_simplex <= 1e-12,
                           "max_err=" + Num(worst_simplex)});
  result.checks.push_back({"symmetric_marginals_nash", worst_nash <= 1e-8,
                           "max_exploitability=" + Num(worst_nash)});
  Finish(result, watch);
  return result;
}

CriterionResult CheckOracleEquivalence(bool smoke) {
  Stopwatch watch;
  CriterionResult result = NewCriterion(3, "oracle_equivalence", 30.0);
  const int games = smoke ? 10 : 50;
  double worst_min = 0.0, worst_max = 0.0;
  Rng rng(3);
  for (int g = 0; g < games; ++g) {
    const MarkovGame game = MakeRandomGame(3, 2, 2, 2, rng);
    const int cells = game.horizon() * game.num_states();
    for (int trial = 0; trial < 10; ++trial) {
      for (Side side : {Side::kMax, Side::kMin}) {
        const MarkovPolicy fixed = RandomMarkovPolicy(side, game, rng);
        const double value =
            BestResponseToMarkov(game, fixed).values.V(0, game.initial_state());
        double best = side == Side::kMax ? INFINITY : -INFINITY;
        for (int mask = 0; mask < (1 << cells); ++mask) {
          std::vector<int> response(cells);
          for (int c = 0; c < cells; ++c) response[c] = (mask >> c) & 1;
          const double v = ForwardValue(game, fixed, response);
          best = side == Side::kMax ? std::min(best, v) : std::max(best, v);
        }
        double& worst = side == Side::kMax ? worst_min : worst_max;
        worst = std::max(worst, std::abs(value - best));
      }
    }
  }
  result.checks.push_back({"min_best_response_vs_enumeration",
                           worst_min <= 1e-10, "max_err=" + Num(worst_min)});
  result.checks.push_back({"max_best_response_vs_enumeration",
                           worst_max <= 1e-10, "max_err=" + Num(worst_max)});

  double worst_zero_sum = 0.0;
  int matrices = 0;
  for (auto [rows, cols] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
    const int n = rows * cols;
    int codes = 1;
    for (int i = 0; i < n; ++i) codes *= 4;
    for (int code = 0; code < codes; ++code) {
      std::vector<std::vector<int>> entries(rows, std::vector<int>(cols));
      Matrix payoff(rows, cols);
      int c = code;
      for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
          entries[i][j] = c % 4;
          c /= 4;
          payoff(i, j) = entries[i][j];
        }
      }
      const double exact = SupportEnumerationValue(entries).ToDouble();
      worst_zero_sum =
          std::max(worst_zero_sum, std::abs(SolveZeroSum(payoff).value - exact));
      ++matrices;
    }
  }
  result.checks.push_back(
      {"zero_sum_vs_support_enumeration", worst_zero_sum <= 1e-10,
       std::to_string(matrices) + " matrices, max_err=" + Num(worst_zero_sum)});
  Finish(result, watch);
  return result;
}

CriterionResult CheckUpdateClosedForm(bool smoke) {
  Stopwatch watch;
  CriterionResult result = NewCriterion(4, "update_closed_form", 5.0);
  const int sequences = smoke ? 20 : 100;
  double worst = 0.0;
  long long cells_checked = 0;
  for (int seq = 0; seq < sequences; ++seq) {
    Rng rng(4000 + seq);
    const int H = 1 + rng.UniformInt(3);
    const int S = 1 + rng.UniformInt(3);
    const MarkovGame game = MakeRandomGame(H, S, 2, 2, rng);
    const int K = 20 + rng.UniformInt(60);
    const double c = 0.1 + 2.0 * rng.Uniform();
    const Hyperparams hp = Hyperparams::For(game, K, c, 0.01);
    NashQLearner learner(game, hp);
    // Value tables at the beginning of every episode.
    std::vector<std::vector<double>> up(K), low(K);
    for (int k = 0; k < K; ++k) {
      for (int h = 0; h <= H; ++h) {
        for (int s = 0; s < S; ++s) {
          up[k].push_back(learner.upper_v(h, s));
          low[k].push_back(learner.lower_v(h, s));
        }
      }
      learner.RunEpisode(rng);
    }
    const NashQHistory& history = learner.history();
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            const auto& visits =
                history.visits.episodes(game.CellIndex(h, s, a, b));
            const int t = static_cast<int>(visits.size());
            const auto w = DirectAlphaWeights(t, H);
            double alpha0 = 1.0;
            for (int j = 1; j <= t; ++j) alpha0 *= 1.0 - (H + 1.0) / (H + j);
            double upper = alpha0 * H, lower = 0.0;
            for (int i = 1; i <= t; ++i) {
              const int k = visits[i - 1];
              const Trajectory& traj = history.trajectories[k - 1];
              const int next = h + 1 < H ? traj.steps[h + 1].state
                                         : traj.terminal_state;
              const double r = traj.steps[h].reward;
              const double bonus = c * std::sqrt(H * H * H * hp.iota / i);
              const std::size_t idx = static_cast<std::size_t>(h + 1) * S + next;
              upper += w[i - 1] * (r + up[k - 1][idx] + bonus);
              lower += w[i - 1] * (r + low[k - 1][idx] - bonus);
            }
            worst = std::max(worst,
                             std::abs(upper - learner.upper_q(h, s, a, b)));
            worst = std::max(worst,
                             std::abs(lower - learner.lower_q(h, s, a, b)));
            ++cells_checked;
          }
        }
      }
    }
  }
  result.checks.push_back({"streaming_equals_closed_form", worst <= 1e-9,
                           std::to_string(cells_checked) +
                               " cells, max_err=" + Num(worst)});
  Finish(result, watch);
  return result;
}

std::vector<CriterionResult> CheckSandwichAndGapDecay(bool smoke, int threads) {
  CriterionResult sandwich = NewCriterion(5, "value_sandwich", 180.0);
  CriterionResult decay = NewCriterion(6, "gap_decay", 180.0);
  Stopwatch watch;
  double train_seconds = 0.0;
  for (Algorithm algorithm : {Algorithm::kNashQ, Algorithm::kNashV}) {
    RunConfig config;
    config.game.generator = "random";
    config.game.horizon = 3;
    config.game.num_states = 3;
    config.game.num_max_actions = 2;
    config.game.num_min_actions = 2;
    config.game.seed = 5;
    config.algorithm = algorithm;
    config.c = 2.0;
    config.p = 0.01;
    config.episodes = smoke ? 4000 : 20000;
    const int num_seeds = smoke ? 4 : 20;
    for (int i = 0; i < num_seeds; ++i) config.seeds.push_back(DeriveSeed(1, i));
    config.threads = threads;
    Stopwatch run_watch;
    const RunReport report = Train(config, false);
    train_seconds += run_watch.Seconds();
    const std::string tag = AlgorithmName(algorithm);
    const double fraction = report.sandwich_fraction.value_or(0.0);
    sandwich.checks.push_back(
        {tag, fraction >= 0.99,
         "fraction=" + Num(fraction) + " v_star=" + Num(*report.v_star)});
    const bool ratio_ok = report.gap_ratio >= 0.35 && report.gap_ratio <= 0.75;
    decay.checks.push_back({tag + "_ratio", ratio_ok,
                            "ratio=" + Num(report.gap_ratio) + " gap_K=" +
                                Num(report.mean_average_gap) + " gap_K/4=" +
                                Num(report.mean_quarter_average_gap)});
    const bool slope_ok =
        report.slope.slope >= -0.65 && report.slope.slope <= -0.35;
    decay.checks.push_back(
        {tag + "_slope", slope_ok,
         "slope=" + Num(report.slope.slope) + " over k in [" +
             std::to_string(report.slope.fit_start) + "," +
             std::to_string(report.slope.fit_end) + "]"});
  }
  sandwich.seconds = train_seconds;
  sandwich.within_time = sandwich.seconds <= sandwich.time_limit;
  decay.seconds = watch.Seconds() - train_seconds;
  decay.within_time = decay.seconds <= decay.time_limit;
  return {sandwich, decay};
}

CriterionResult CheckCertifiedSoundness(bool smoke) {
  Stopwatch watch;
  CriterionResult result = NewCriterion(7, "certified_policy_soundness", 120.0);
  Rng game_rng(7);
  const MarkovGame game = MakeRandomGame(2, 2, 2, 2, game_rng);
  constexpr int kEpisodes = 200;
  const Hyperparams hp = Hyperparams::For(game, kEpisodes, 2.0, 0.01);
  const int num_seeds = smoke ? 3 : 10;
  double mean_exploitability = 0.0, mean_gap = 0.0, min_exploitability = INFINITY;
  std::vector<NashQHistory> histories;
  for (int i = 0; i < num_seeds; ++i) {
    Rng rng(DeriveSeed(70, i));
    histories.push_back(RunNashQ(game, hp, kEpisodes, rng));
    const NashQHistory& history = histories.back();
    const PolicyTree mu = CertifiedPolicyTreeQ(history, Side::kMax, 1 << 20);
    const PolicyTree nu = CertifiedPolicyTreeQ(history, Side::kMin, 1 << 20);
    const double e = ExploitabilityExact(game, mu, nu).exploitability;
    mean_exploitability += e / num_seeds;
    min_exploitability = std::min(min_exploitability, e);
    mean_gap += AverageGap(history.upper_trace, history.lower_trace,
                           kEpisodes) /
                num_seeds;
  }
  result.checks.push_back(
      {"exploitability_below_gap", mean_exploitability <= mean_gap + 0.02,
       "mean_exploitability=" + Num(mean_exploitability) +
           " mean_gap=" + Num(mean_gap)});
  result.checks.push_back({"exploitability_nonnegative",
                           min_exploitability >= -1e-12,
                           "min=" + Num(min_exploitability)});

  const long long rollouts = smoke ? 100000 : 1000000;
  for (Side side : {Side::kMax, Side::kMin}) {
    const NashQCertifiedPolicy policy(histories[0], side);
    const PolicyTree tree = BuildPolicyTree(policy, 1 << 20);
    const MarkovPolicy opponent = MarkovPolicy::Uniform(Opponent(side), game);
    const auto exact = TreeActionMarginals(game, tree, opponent);
    std::vector<std::vector<long long>> counts(
        game.horizon(), std::vector<long long>(tree.num_own_actions, 0));
    CertifiedPolicyActor actor(policy);
    MarkovPolicyActor other(opponent);
    Rng rng(side == Side::kMax ? 71 : 72);
    for (long long i = 0; i < rollouts; ++i) {
      const Trajectory traj =
          side == Side::kMax ? SampleEpisode(game, actor, other, rng)
                             : SampleEpisode(game, other, actor, rng);
      for (int h = 0; h < game.horizon(); ++h) {
        const Step& step = traj.steps[h];
        ++counts[h][side == Side::kMax ? step.max_action : step.min_action];
      }
    }
    double worst_z = 0.0;
    for (int h = 0; h < game.horizon(); ++h) {
      for (int a = 0; a < tree.num_own_actions; ++a) {
        const double p = exact[h][a];
        const double f = static_cast<double>(counts[h][a]) / rollouts;
        const double sigma = std::sqrt(p * (1.0 - p) / rollouts);
        const double z = sigma > 0 ? std::abs(f - p) / sigma
                                   : (f == p ? 0.0 : INFINITY);
        worst_z = std::max(worst_z, z);
      }
    }
    result.checks.push_back(
        {std::string("executor_frequencies_") + SideName(side), worst_z <= 3.0,
         "max_z=" + Num(worst_z) + " over " + std::to_string(rollouts)});
  }
  Finish(result, watch);
  return result;
}

CriterionResult CheckBanditRegret(bool) {
  Stopwatch watch;
  CriterionResult result = NewCriterion(8, "weighted_bandit_regret", 60.0);
  constexpr int kRounds = 2000;
  constexpr int kTrials = 100;
  constexpr double kFailure = 0.05;
  constexpr int kWeightHorizon = 2;
  for (int A : {2, 5}) {
    const double iota = std::log(A * kRounds / kFailure);
    std::vector<double> means(A);
    for (int a = 0; a < A; ++a) means[a] = 0.2 + 0.6 * a / (A - 1);
    const auto alpha_weights = ComputeAlphaWeights(kRounds, kWeightHorizon).weights;
    const std::vector<double> uniform(kRounds, 1.0);
    struct Adversary {
      std::string name;
      LossOracle oracle;
      const std::vector<double>* weights;
    };
    const std::vector<Adversary> adversaries = {
        {"stochastic", [&](int) { return means; }, &alpha_weights},
        {"alternating",
         [A](int t) {
           std::vector<double> l(A);
           for (int a = 0; a < A; ++a) l[a] = (t + a) % 2;
           return l;
         },
         &uniform}};
    for (const auto& adversary : adversaries) {
      const double bound = WeightedRegretBound(*adversary.weights, A, iota);
      int below = 0;
      double worst = -INFINITY;
      for (int trial = 0; trial < kTrials; ++trial) {
        Rng rng(DeriveSeed(800 + A, trial));
        const BanditRun run =
            RunWeightedBandit(A, adversary.oracle, *adversary.weights, rng);
        if (run.weighted_regret < bound) ++below;
        worst = std::max(worst, run.weighted_regret);
      }
      result.checks.push_back(
          {adversary.name + "_A" + std::to_string(A), below >= 95,
           std::to_string(below) + "/100 below bound=" + Num(bound) +
               " worst=" + Num(worst)});
    }
  }
  Finish(result, watch);
  return result;
}

CriterionResult CheckParityInstance(bool smoke) {
  Stopwatch watch;
  CriterionResult result = NewCriterion(9, "parity_instance", 30.0);
  // Next bit by row (current bit) and column (a0b0, a0b1, a1b0, a1b1).
  constexpr int kNextBit[2][4] = {{0, 0, 0, 1}, {1, 0, 1, 1}};
  int table_mismatches = 0;
  for (int n = 1; n <= 6; ++n) {
    const MarkovGame game = MakeParityGame(n);
    const int H = n + 1;
    // Layout: 1_0, 2_0, 2_1, ..., H_0, H_1, terminal.
    auto index = [](int i, int bit) { return i == 1 ? 0 : 2 * i - 3 + bit; };
    const int terminal = 2 * H - 1;
    if (game.horizon() != H || game.num_states() != 2 * H ||
        game.num_max_actions() != 2 || game.num_min_actions() != 2 ||
        game.initial_state() != 0 || !ValidateGame(game).empty()) {
      ++table_mismatches;
      continue;
    }
    for (int i = 1; i <= H; ++i) {
      for (int bit = 0; bit < (i == 1 ? 1 : 2); ++bit) {
        const int s = index(i, bit);
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            const int expected_next =
                i < H ? index(i + 1, kNextBit[bit][2 * a + b]) : terminal;
            auto next = game.next_state_distribution(i - 1, s, a, b);
            if (next[expected_next] != 1.0) ++table_mismatches;
            const double expected_reward = i < H ? 0.0 : (bit == b ? 1.0 : 0.0);
            if (game.reward(i - 1, s, a, b) != expected_reward) {
              ++table_mismatches;
            }
          }
        }
      }
    }
    // Rewards vanish before the last step everywhere.
    for (int h = 0; h + 1 < H; ++h) {
      for (int s = 0; s < game.num_states(); ++s) {
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            if (game.reward(h, s, a, b) != 0.0) ++table_mismatches;
          }
        }
      }
    }
  }
  result.checks.push_back({"tables_match", table_mismatches == 0,
                           std::to_string(table_mismatches) + " mismatches"});

  double worst_noiseless = 0.0;
  double literal_value = -1.0;
  for (int n = 1; n <= 6; ++n) {
    const MarkovGame game = MakeParityGame(n);
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<int> subset;
      for (int i = 0; i < n; ++i) {
        if (mask >> i & 1) subset.push_back(i + 1);
      }
      const MarkovPolicy mu = MakeParityTrackingPolicy(n, subset);
      double total = 0.0;
      for (int xcode = 0; xcode < (1 << n); ++xcode) {
        std::vector<int> x(n);
        int parity = 0;
        for (int i = 0; i < n; ++i) {
          x[i] = xcode >> i & 1;
          if (mask >> i & 1) parity ^= x[i];
        }
        total += ParityOracleReward(n, game, mu, x, parity);
      }
      worst_noiseless = std::max(worst_noiseless, 1.0 - total / (1 << n));
    }
    if (n == 3) {
      // a1 exactly on T = {1, 2}, a0 elsewhere.
      std::vector<int> actions(game.horizon() * game.num_states(), 0);
      for (int s = 0; s < game.num_states(); ++s) {
        actions[0 * game.num_states() + s] = 1;
        actions[1 * game.num_states() + s] = 1;
      }
      const MarkovPolicy literal =
          MarkovPolicy::Deterministic(Side::kMax, game, actions);
      double total = 0.0;
      for (int xcode = 0; xcode < 8; ++xcode) {
        std::vector<int> x = {xcode & 1, xcode >> 1 & 1, xcode >> 2 & 1};
        total += ParityOracleReward(3, game, literal, x, x[0] ^ x[1]);
      }
      literal_value = total / 8;
    }
  }
  result.checks.push_back(
      {"noiseless_value_one", worst_noiseless <= 1e-12,
       "max_shortfall=" + Num(worst_noiseless) +
           " (a1-exactly-on-T policy scores " + Num(literal_value) + ")"});

  const long long episodes = smoke ? 20000 : 200000;
  double worst_noisy = 0.0;
  Rng rng(9);
  for (int n : {3, 6}) {
    for (double noise : {0.1, 0.3}) {
      std::vector<int> subset;
      for (int i = 1; i <= n; ++i) {
        if (rng.Bernoulli(0.5)) subset.push_back(i);
      }
      if (subset.empty()) subset.push_back(1);
      const MarkovGame game = MakeParityGame(n);
      const MarkovPolicy mu = MakeParityTrackingPolicy(n, subset);
      MarkovPolicyActor actor(mu);
      ParityOpponent opponent(n, subset, noise);
      const McEstimate estimate =
          PairValueMc(game, actor, opponent, episodes, rng);
      worst_noisy =
          std::max(worst_noisy, std::abs(estimate.mean - (1.0 - noise)));
    }
  }
  result.checks.push_back({"noisy_value", worst_noisy <= 0.01,
                           "max_err=" + Num(worst_noisy)});

  double worst_v = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const MarkovGame game = MakeParityGame(n);
    worst_v = std::max(worst_v,
                       std::abs(NashValueOracle(game).V(0, game.initial_state())));
  }
  result.checks.push_back(
      {"nash_value_zero", worst_v <= 1e-10, "max_abs=" + Num(worst_v)});
  Finish(result, watch);
  return result;
}

CriterionResult CheckDeterminism(bool smoke) {
  Stopwatch watch;
  CriterionResult result = NewCriterion(10, "determinism", 60.0);
  const fs::path root = fs::temp_directory_path() /
                        ("nashplay_determinism_" + std::to_string(::getpid()));
  fs::remove_all(root);
  for (Algorithm algorithm : {Algorithm::kNashQ, Algorithm::kNashV}) {
    const std::string tag = AlgorithmName(algorithm);
    nlohmann::json doc = {
        {"game",
         {{"generator", "random"},
          {"horizon", 2},
          {"states", 2},
          {"max_actions", 2},
          {"min_actions", 2},
          {"seed", 11}}},
        {"algorithm", tag},
        {"episodes", smoke ? 100 : 300},
        {"seeds", {{"base", 5}, {"count", 3}}},
        {"evaluation",
         {{"exact_exploitability", true},
          {"mc_exploitability", true},
          {"mc_episodes", smoke ? 2000 : 20000}}}};
    RunConfig first = ParseRunConfig(doc);
    first.output_dir = (root / (tag + "_a")).string();
    first.threads = 1;
    RunConfig second = first;
    second.output_dir = (root / (tag + "_b")).string();
    second.threads = 3;
    Train(first, true);
    Train(second, true);
    const auto a = DirectoryContents(first.output_dir);
    const auto b = DirectoryContents(second.output_dir);
    result.checks.push_back({tag + "_train_identical", a == b && !a.empty(),
                             std::to_string(a.size()) + " files"});

    EvaluationFlags flags = first.evaluation;
    const std::string snapshot =
        (fs::path(first.output_dir) / ("seed_" + std::to_string(first.seeds[0])) /
         "snapshot.bin")
            .string();
    EvaluateSnapshotFile(snapshot, flags);
    const auto once = DirectoryContents(first.output_dir);
    EvaluateSnapshotFile(snapshot, flags);
    const auto twice = DirectoryContents(first.output_dir);
    result.checks.push_back(
        {tag + "_evaluate_idempotent", once == twice && once == a, ""});
  }
  fs::remove_all(root);
  Finish(result, watch);
  return result;
}

std::vector<CriterionResult> RunAcceptance(const AcceptanceOptions& options) {
  auto wanted = [&](int id) {
    return options.only.empty() || options.only.count(id) > 0;
  };
  const AlphaSchedule alpha =
      options.alpha ? options.alpha : AlphaSchedule(Alpha);
  std::vector<CriterionResult> results;
  if (wanted(1)) results.push_back(CheckScheduleIdentities(alpha));
  if (wanted(2)) results.push_back(CheckCce(options.smoke));
  if (wanted(3)) results.push_back(CheckOracleEquivalence(options.smoke));
  if (wanted(4)) results.push_back(CheckUpdateClosedForm(options.smoke));
  if (wanted(5) || wanted(6)) {
    for (auto& r : CheckSandwichAndGapDecay(options.smoke, options.threads)) {
      if (wanted(r.id)) results.push_back(std::move(r));
    }
  }
  if (wanted(7)) results.push_back(CheckCertifiedSoundness(options.smoke));
  if (wanted(8)) results.push_back(CheckBanditRegret(options.smoke));
  if (wanted(9)) results.push_back(CheckParityInstance(options.smoke));
  if (wanted(10)) results.push_back(CheckDeterminism(options.smoke));
  return results;
}

}  // namespace nashplay
