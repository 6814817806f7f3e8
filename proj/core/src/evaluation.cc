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
#include "nashplay/evaluation.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "nashplay/matrix_game.h"

namespace nashplay {
namespace {

// r + P V_{h+1} at (h, s, a, b).
double Backup(const MarkovGame& game, const ValueTable& table, int h, int s,
              int a, int b) {
  double value = game.reward(h, s, a, b);
  auto next = game.next_state_distribution(h, s, a, b);
  for (int s2 = 0; s2 < game.num_states(); ++s2) {
    if (next[s2] != 0.0) value += next[s2] * table.V(h + 1, s2);
  }
  return value;
}

void FillQ(const MarkovGame& game, ValueTable& table, int h) {
  for (int s = 0; s < game.num_states(); ++s) {
    for (int a = 0; a < game.num_max_actions(); ++a) {
      for (int b = 0; b < game.num_min_actions(); ++b) {
        table.Q(h, s, a, b) = Backup(game, table, h, s, a, b);
      }
    }
  }
}

// Responder picks the pure action optimizing values[x]; lowest index wins
// ties.
int ArgOpt(const std::vector<double>& values, bool maximize) {
  int best = 0;
  for (int x = 1; x < static_cast<int>(values.size()); ++x) {
    if (maximize ? values[x] > values[best] : values[x] < values[best]) {
      best = x;
    }
  }
  return best;
}

void CheckSides(const MarkovGame& game, const MarkovPolicy& mu,
                const MarkovPolicy& nu) {
  if (mu.side() != Side::kMax || nu.side() != Side::kMin ||
      mu.num_actions() != game.num_max_actions() ||
      nu.num_actions() != game.num_min_actions()) {
    throw std::invalid_argument("policies do not match the game");
  }
}

// Per tree node and responder action x: expected r + continuation, where the
// continuation of child c is cont[c].
std::vector<double> ResponderValues(const MarkovGame& game,
                                    const PolicyTree& tree, int id,
                                    const std::vector<double>& cont) {
  const PolicyTreeNode& node = tree.nodes[id];
  const bool last = node.h + 1 == game.horizon();
  std::vector<double> values(tree.num_opponent_actions, 0.0);
  for (int x = 0; x < tree.num_opponent_actions; ++x) {
    double total = 0.0;
    for (int own = 0; own < tree.num_own_actions; ++own) {
      const double p = node.action_probs[own];
      if (p <= 0.0) continue;
      const int a = tree.side == Side::kMax ? own : x;
      const int b = tree.side == Side::kMax ? x : own;
      double value = game.reward(node.h, node.state, a, b);
      if (!last) {
        auto next = game.next_state_distribution(node.h, node.state, a, b);
        for (int s2 = 0; s2 < game.num_states(); ++s2) {
          if (next[s2] > 0.0) {
            value += next[s2] * cont[tree.Child(id, own, x, s2)];
          }
        }
      }
      total += p * value;
    }
    values[x] = total;
  }
  return values;
}

class PairEvaluator {
 public:
  PairEvaluator(const MarkovGame& game, const PolicyTree& mu,
                const PolicyTree& nu)
      : game_(game), mu_(mu), nu_(nu) {}

  double Value(int i, int j) {
    const auto key = std::make_pair(i, j);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const PolicyTreeNode& m = mu_.nodes[i];
    const PolicyTreeNode& n = nu_.nodes[j];
    if (m.h != n.h || m.state != n.state) {
      throw std::logic_error("PairEvaluator: trees out of sync");
    }
    const bool last = m.h + 1 == game_.horizon();
    double total = 0.0;
    for (int a = 0; a < mu_.num_own_actions; ++a) {
      if (m.action_probs[a] <= 0.0) continue;
      for (int b = 0; b < nu_.num_own_actions; ++b) {
        const double p = m.action_probs[a] * n.action_probs[b];
        if (p <= 0.0) continue;
        double value = game_.reward(m.h, m.state, a, b);
        if (!last) {
          auto next = game_.next_state_distribution(m.h, m.state, a, b);
          for (int s2 = 0; s2 < game_.num_states(); ++s2) {
            if (next[s2] > 0.0) {
              value += next[s2] * Value(mu_.Child(i, a, b, s2),
                                        nu_.Child(j, b, a, s2));
            }
          }
        }
        total += p * value;
      }
    }
    memo_[key] = total;
    return total;
  }

 private:
  const MarkovGame& game_;
  const PolicyTree& mu_;
  const PolicyTree& nu_;
  std::map<std::pair<int, int>, double> memo_;
};

}  // namespace

ValueTable ValueTable::ForGame(const MarkovGame& game, bool with_q) {
  ValueTable table;
  table.horizon = game.horizon();
  table.num_states = game.num_states();
  table.num_max_actions = game.num_max_actions();
  table.num_min_actions = game.num_min_actions();
  table.v.assign(static_cast<std::size_t>(game.horizon() + 1) *
                     game.num_states(),
                 0.0);
  if (with_q) table.q.assign(game.num_cells(), 0.0);
  return table;
}

double BellmanResidual(const MarkovGame& game, const ValueTable& table) {
  if (!table.has_q()) throw std::invalid_argument("BellmanResidual: no Q");
  double worst = 0.0;
  for (int s = 0; s < game.num_states(); ++s) {
    worst = std::max(worst, std::abs(table.V(game.horizon(), s)));
  }
  for (int h = 0; h < game.horizon(); ++h) {
    for (int s = 0; s < game.num_states(); ++s) {
      for (int a = 0; a < game.num_max_actions(); ++a) {
        for (int b = 0; b < game.num_min_actions(); ++b) {
          worst = std::max(worst, std::abs(table.Q(h, s, a, b) -
                                           Backup(game, table, h, s, a, b)));
        }
      }
    }
  }
  return worst;
}

NashSolution SolveMarkovGame(const MarkovGame& game) {
  const int H = game.horizon();
  const int S = game.num_states();
  const int A = game.num_max_actions();
  const int B = game.num_min_actions();
  ValueTable table = ValueTable::ForGame(game, true);
  std::vector<double> mu(static_cast<std::size_t>(H) * S * A);
  std::vector<double> nu(static_cast<std::size_t>(H) * S * B);
  for (int h = H - 1; h >= 0; --h) {
    FillQ(game, table, h);
    for (int s = 0; s < S; ++s) {
      Matrix payoff(A, B);
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < B; ++b) payoff(a, b) = table.Q(h, s, a, b);
      }
      const ZeroSumSolution solution = SolveZeroSum(payoff);
      table.V(h, s) = solution.value;
      std::copy(solution.max_strategy.begin(), solution.max_strategy.end(),
                mu.begin() + (static_cast<std::size_t>(h) * S + s) * A);
      std::copy(solution.min_strategy.begin(), solution.min_strategy.end(),
                nu.begin() + (static_cast<std::size_t>(h) * S + s) * B);
    }
  }
  return {std::move(table), MarkovPolicy(Side::kMax, H, S, A, std::move(mu)),
          MarkovPolicy(Side::kMin, H, S, B, std::move(nu))};
}

ValueTable NashValueOracle(const MarkovGame& game) {
  return SolveMarkovGame(game).values;
}

BestResponse BestResponseToMarkov(const MarkovGame& game,
                                  const MarkovPolicy& policy) {
  const Side side = policy.side();
  if (policy.num_actions() != game.num_actions(side) ||
      policy.horizon() != game.horizon() ||
      policy.num_states() != game.num_states()) {
    throw std::invalid_argument("BestResponseToMarkov: policy/game mismatch");
  }
  const int H = game.horizon();
  const int S = game.num_states();
  const int own_n = game.num_actions(side);
  const int resp_n = game.num_actions(Opponent(side));
  ValueTable table = ValueTable::ForGame(game, true);
  std::vector<int> actions(static_cast<std::size_t>(H) * S);
  for (int h = H - 1; h >= 0; --h) {
    FillQ(game, table, h);
    for (int s = 0; s < S; ++s) {
      auto row = policy.row(h, s);
      std::vector<double> values(resp_n, 0.0);
      for (int x = 0; x < resp_n; ++x) {
        for (int y = 0; y < own_n; ++y) {
          const int a = side == Side::kMax ? y : x;
          const int b = side == Side::kMax ? x : y;
          values[x] += row[y] * table.Q(h, s, a, b);
        }
      }
      const int best = ArgOpt(values, side == Side::kMin);
      actions[h * S + s] = best;
      table.V(h, s) = values[best];
    }
  }
  return {MarkovPolicy::Deterministic(Opponent(side), game, actions),
          std::move(table)};
}

ValueTable FixedPairValue(const MarkovGame& game, const MarkovPolicy& mu,
                          const MarkovPolicy& nu) {
  CheckSides(game, mu, nu);
  ValueTable table = ValueTable::ForGame(game, true);
  for (int h = game.horizon() - 1; h >= 0; --h) {
    FillQ(game, table, h);
    for (int s = 0; s < game.num_states(); ++s) {
      auto p = mu.row(h, s);
      auto q = nu.row(h, s);
      double value = 0.0;
      for (int a = 0; a < game.num_max_actions(); ++a) {
        for (int b = 0; b < game.num_min_actions(); ++b) {
          value += p[a] * q[b] * table.Q(h, s, a, b);
        }
      }
      table.V(h, s) = value;
    }
  }
  return table;
}

TreeBestResponse BestResponseToTree(const MarkovGame& game,
                                    const PolicyTree& tree) {
  TreeBestResponse out;
  const int n = static_cast<int>(tree.nodes.size());
  out.node_values.assign(n, 0.0);
  out.actions.assign(n, 0);
  // Children always have larger ids than their parents.
  for (int id = n - 1; id >= 0; --id) {
    const auto values = ResponderValues(game, tree, id, out.node_values);
    const int best = ArgOpt(values, tree.side == Side::kMin);
    out.actions[id] = best;
    out.node_values[id] = values[best];
  }
  out.value = out.node_values[0];
  return out;
}

Exploitability ExploitabilityExact(const MarkovGame& game,
                                   const PolicyTree& tree_mu,
                                   const PolicyTree& tree_nu) {
  if (tree_mu.side != Side::kMax || tree_nu.side != Side::kMin) {
    throw std::invalid_argument("ExploitabilityExact: trees have wrong sides");
  }
  Exploitability out;
  out.max_response = BestResponseToTree(game, tree_nu);
  out.min_response = BestResponseToTree(game, tree_mu);
  out.max_response_value = out.max_response.value;
  out.min_response_value = out.min_response.value;
  out.exploitability = out.max_response_value - out.min_response_value;
  return out;
}

double TreePairValue(const MarkovGame& game, const PolicyTree& tree_mu,
                     const PolicyTree& tree_nu) {
  if (tree_mu.side != Side::kMax || tree_nu.side != Side::kMin) {
    throw std::invalid_argument("TreePairValue: trees have wrong sides");
  }
  PairEvaluator evaluator(game, tree_mu, tree_nu);
  return evaluator.Value(0, 0);
}

double TreeVsMarkovValue(const MarkovGame& game, const PolicyTree& tree,
                         const MarkovPolicy& opponent) {
  if (opponent.side() == tree.side) {
    throw std::invalid_argument("TreeVsMarkovValue: opponent on same side");
  }
  const int n = static_cast<int>(tree.nodes.size());
  std::vector<double> value(n, 0.0);
  for (int id = n - 1; id >= 0; --id) {
    const auto values = ResponderValues(game, tree, id, value);
    auto row = opponent.row(tree.nodes[id].h, tree.nodes[id].state);
    double total = 0.0;
    for (std::size_t x = 0; x < values.size(); ++x) total += row[x] * values[x];
    value[id] = total;
  }
  return value[0];
}

std::vector<std::vector<double>> TreeActionMarginals(
    const MarkovGame& game, const PolicyTree& tree,
    const MarkovPolicy& opponent) {
  std::vector<std::vector<double>> marginals(
      game.horizon(), std::vector<double>(tree.num_own_actions, 0.0));
  std::vector<double> reach(tree.nodes.size(), 0.0);
  reach[0] = 1.0;
  for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
    const PolicyTreeNode& node = tree.nodes[id];
    if (reach[id] == 0.0) continue;
    auto row = opponent.row(node.h, node.state);
    for (int own = 0; own < tree.num_own_actions; ++own) {
      const double p = reach[id] * node.action_probs[own];
      if (p <= 0.0) continue;
      marginals[node.h][own] += p;
      if (node.children.empty()) continue;
      for (int x = 0; x < tree.num_opponent_actions; ++x) {
        const int a = tree.side == Side::kMax ? own : x;
        const int b = tree.side == Side::kMax ? x : own;
        auto next = game.next_state_distribution(node.h, node.state, a, b);
        for (int s2 = 0; s2 < game.num_states(); ++s2) {
          if (next[s2] > 0.0) {
            reach[tree.Child(static_cast<int>(id), own, x, s2)] +=
                p * row[x] * next[s2];
          }
        }
      }
    }
  }
  return marginals;
}

void TreeResponseActor::Reset(Rng&) {
  node_ = 0;
  pending_ = false;
}

int TreeResponseActor::Act(int h, int state, Rng&) {
  if (pending_) {
    node_ = tree_.Child(node_, own_, opponent_, state);
    pending_ = false;
  }
  if (node_ < 0 || tree_.nodes[node_].h != h ||
      tree_.nodes[node_].state != state) {
    throw std::logic_error("TreeResponseActor: history left the tree");
  }
  return response_.actions[node_];
}

void TreeResponseActor::Observe(int, int, int max_action, int min_action,
                                Rng&) {
  own_ = tree_.side == Side::kMax ? max_action : min_action;
  opponent_ = tree_.side == Side::kMax ? min_action : max_action;
  pending_ = true;
}

McEstimate PairValueMc(const MarkovGame& game, EpisodeActor& max_actor,
                       EpisodeActor& min_actor, long long episodes, Rng& rng) {
  if (episodes < 1) throw std::invalid_argument("PairValueMc: no episodes");
  double sum = 0.0, sum_sq = 0.0;
  for (long long i = 0; i < episodes; ++i) {
    const double g = SampleEpisode(game, max_actor, min_actor, rng).Return();
    sum += g;
    sum_sq += g * g;
  }
  McEstimate out;
  out.episodes = episodes;
  out.mean = sum / episodes;
  const double var =
      episodes > 1
          ? std::max(0.0, (sum_sq - episodes * out.mean * out.mean) /
                              (episodes - 1))
          : 0.0;
  out.std_error = std::sqrt(var / episodes);
  return out;
}

McEstimate ExploitabilityMc(const MarkovGame& game, EpisodeActor& mu,
                            EpisodeActor& nu, EpisodeActor& max_response,
                            EpisodeActor& min_response, long long episodes,
                            Rng& rng) {
  const McEstimate upper = PairValueMc(game, max_response, nu, episodes, rng);
  const McEstimate lower = PairValueMc(game, mu, min_response, episodes, rng);
  return {upper.mean - lower.mean,
          std::sqrt(upper.std_error * upper.std_error +
                    lower.std_error * lower.std_error),
          episodes};
}

}  // namespace nashplay
