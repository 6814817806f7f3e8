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
#include "nashplay/game.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nashplay {
namespace {

constexpr double kSimplexTolerance = 1e-12;

// Next state bit of the parity instance, indexed [bit][a][b].
constexpr int kParityNextBit[2][2][2] = {{{0, 0}, {0, 1}}, {{1, 0}, {1, 1}}};

void RequirePositive(int value, const char* what) {
  if (value < 1) {
    throw std::invalid_argument(std::string(what) + " must be positive");
  }
}

}  // namespace

const char* SideName(Side side) { return side == Side::kMax ? "max" : "min"; }

MarkovGame::MarkovGame(int horizon, int num_states, int num_max_actions,
                       int num_min_actions, std::vector<double> transitions,
                       std::vector<double> rewards, int initial_state)
    : horizon_(horizon),
      num_states_(num_states),
      num_max_actions_(num_max_actions),
      num_min_actions_(num_min_actions),
      transitions_(std::move(transitions)),
      rewards_(std::move(rewards)),
      initial_state_(initial_state) {
  RequirePositive(horizon, "horizon");
  RequirePositive(num_states, "num_states");
  RequirePositive(num_max_actions, "num_max_actions");
  RequirePositive(num_min_actions, "num_min_actions");
  if (rewards_.size() != num_cells()) {
    throw std::invalid_argument("reward tensor has wrong size");
  }
  if (transitions_.size() != num_cells() * num_states_) {
    throw std::invalid_argument("transition tensor has wrong size");
  }
}

bool operator==(const MarkovGame& lhs, const MarkovGame& rhs) {
  return lhs.horizon() == rhs.horizon() &&
         lhs.num_states() == rhs.num_states() &&
         lhs.num_max_actions() == rhs.num_max_actions() &&
         lhs.num_min_actions() == rhs.num_min_actions() &&
         lhs.initial_state() == rhs.initial_state() &&
         lhs.transitions() == rhs.transitions() &&
         lhs.rewards() == rhs.rewards();
}

std::vector<ValidationIssue> ValidateGame(const MarkovGame& game) {
  std::vector<ValidationIssue> issues;
  if (game.initial_state() < 0 || game.initial_state() >= game.num_states()) {
    issues.push_back({-1, game.initial_state(), -1, -1,
                      "initial state out of range"});
  }
  for (int h = 0; h < game.horizon(); ++h) {
    for (int s = 0; s < game.num_states(); ++s) {
      for (int a = 0; a < game.num_max_actions(); ++a) {
        for (int b = 0; b < game.num_min_actions(); ++b) {
          const double r = game.reward(h, s, a, b);
          if (!(r >= 0.0 && r <= 1.0)) {
            issues.push_back({h, s, a, b, "reward out of [0,1]"});
          }
          const auto row = game.next_state_distribution(h, s, a, b);
          bool negative = false;
          double total = 0.0;
          for (double p : row) {
            if (!(p >= 0.0)) negative = true;
            total += p;
          }
          if (negative) {
            issues.push_back({h, s, a, b, "negative transition probability"});
          }
          if (!(std::abs(total - 1.0) <= kSimplexTolerance)) {
            std::ostringstream msg;
            msg << "transition row sums to " << total;
            issues.push_back({h, s, a, b, msg.str()});
          }
        }
      }
    }
  }
  return issues;
}

bool IsSimplex(std::span<const double> row, double tolerance) {
  double total = 0.0;
  for (double p : row) {
    if (!(p >= 0.0)) return false;
    total += p;
  }
  return std::abs(total - 1.0) <= tolerance;
}

MarkovPolicy::MarkovPolicy(Side side, int horizon, int num_states,
                           int num_actions, std::vector<double> probs)
    : side_(side),
      horizon_(horizon),
      num_states_(num_states),
      num_actions_(num_actions),
      probs_(std::move(probs)) {
  if (probs_.size() !=
      static_cast<std::size_t>(horizon) * num_states * num_actions) {
    throw std::invalid_argument("MarkovPolicy: wrong table size");
  }
  for (int h = 0; h < horizon_; ++h) {
    for (int s = 0; s < num_states_; ++s) {
      if (!IsSimplex(row(h, s), kSimplexTolerance)) {
        throw std::invalid_argument("MarkovPolicy: row is not a distribution");
      }
    }
  }
}

MarkovPolicy MarkovPolicy::Uniform(Side side, const MarkovGame& game) {
  const int n = game.num_actions(side);
  return MarkovPolicy(
      side, game.horizon(), game.num_states(), n,
      std::vector<double>(
          static_cast<std::size_t>(game.horizon()) * game.num_states() * n,
          1.0 / n));
}

MarkovPolicy MarkovPolicy::Deterministic(Side side, const MarkovGame& game,
                                         const std::vector<int>& actions) {
  const int n = game.num_actions(side);
  const std::size_t rows =
      static_cast<std::size_t>(game.horizon()) * game.num_states();
  if (actions.size() != rows) {
    throw std::invalid_argument("Deterministic: need one action per (h, s)");
  }
  std::vector<double> probs(rows * n, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (actions[i] < 0 || actions[i] >= n) {
      throw std::invalid_argument("Deterministic: illegal action");
    }
    probs[i * n + actions[i]] = 1.0;
  }
  return MarkovPolicy(side, game.horizon(), game.num_states(), n,
                      std::move(probs));
}

MarkovJointPolicy::MarkovJointPolicy(int horizon, int num_states,
                                     int num_max_actions, int num_min_actions,
                                     std::vector<double> probs)
    : horizon_(horizon),
      num_states_(num_states),
      num_max_actions_(num_max_actions),
      num_min_actions_(num_min_actions),
      probs_(std::move(probs)) {
  if (probs_.size() != static_cast<std::size_t>(horizon) * num_states *
                           RowSize()) {
    throw std::invalid_argument("MarkovJointPolicy: wrong table size");
  }
  for (int h = 0; h < horizon_; ++h) {
    for (int s = 0; s < num_states_; ++s) {
      if (!IsSimplex(row(h, s), kSimplexTolerance)) {
        throw std::invalid_argument(
            "MarkovJointPolicy: row is not a distribution");
      }
    }
  }
}

MarkovJointPolicy MarkovJointPolicy::Uniform(const MarkovGame& game) {
  const int pairs = game.num_max_actions() * game.num_min_actions();
  return MarkovJointPolicy(
      game.horizon(), game.num_states(), game.num_max_actions(),
      game.num_min_actions(),
      std::vector<double>(
          static_cast<std::size_t>(game.horizon()) * game.num_states() * pairs,
          1.0 / pairs));
}

double Trajectory::Return() const {
  double total = 0.0;
  for (const Step& step : steps) total += step.reward;
  return total;
}

int MarkovPolicyActor::Act(int h, int state, Rng& rng) {
  return rng.Categorical(policy_.row(h, state));
}

Trajectory SampleEpisode(const MarkovGame& game, EpisodeActor& max_actor,
                         EpisodeActor& min_actor, Rng& rng) {
  Trajectory trajectory;
  trajectory.steps.reserve(game.horizon());
  max_actor.Reset(rng);
  min_actor.Reset(rng);
  int state = game.initial_state();
  for (int h = 0; h < game.horizon(); ++h) {
    const int a = max_actor.Act(h, state, rng);
    const int b = min_actor.Act(h, state, rng);
    if (a < 0 || a >= game.num_max_actions() || b < 0 ||
        b >= game.num_min_actions()) {
      throw std::logic_error("SampleEpisode: actor returned illegal action");
    }
    max_actor.Observe(h, state, a, b, rng);
    min_actor.Observe(h, state, a, b, rng);
    trajectory.steps.push_back({state, a, b, game.reward(h, state, a, b)});
    state = rng.Categorical(game.next_state_distribution(h, state, a, b));
  }
  trajectory.terminal_state = state;
  return trajectory;
}

Trajectory SampleEpisode(const MarkovGame& game, const MarkovPolicy& mu,
                         const MarkovPolicy& nu, Rng& rng) {
  MarkovPolicyActor max_actor(mu);
  MarkovPolicyActor min_actor(nu);
  return SampleEpisode(game, max_actor, min_actor, rng);
}

Trajectory SampleEpisode(const MarkovGame& game,
                         const MarkovJointPolicy& policy, Rng& rng) {
  Trajectory trajectory;
  trajectory.steps.reserve(game.horizon());
  const int num_b = game.num_min_actions();
  int state = game.initial_state();
  for (int h = 0; h < game.horizon(); ++h) {
    const int pair = rng.Categorical(policy.row(h, state));
    const int a = pair / num_b;
    const int b = pair % num_b;
    trajectory.steps.push_back({state, a, b, game.reward(h, state, a, b)});
    state = rng.Categorical(game.next_state_distribution(h, state, a, b));
  }
  trajectory.terminal_state = state;
  return trajectory;
}

MarkovGame MakeRandomGame(int horizon, int num_states, int num_max_actions,
                          int num_min_actions, Rng& rng) {
  RequirePositive(horizon, "horizon");
  RequirePositive(num_states, "num_states");
  RequirePositive(num_max_actions, "num_max_actions");
  RequirePositive(num_min_actions, "num_min_actions");
  const std::size_t cells = static_cast<std::size_t>(horizon) * num_states *
                            num_max_actions * num_min_actions;
  std::vector<double> transitions(cells * num_states);
  std::vector<double> rewards(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    double* row = transitions.data() + cell * num_states;
    double total = 0.0;
    for (int s = 0; s < num_states; ++s) {
      row[s] = rng.Exponential();
      total += row[s];
    }
    for (int s = 0; s < num_states; ++s) row[s] /= total;
    rewards[cell] = rng.Uniform();
  }
  return MarkovGame(horizon, num_states, num_max_actions, num_min_actions,
                    std::move(transitions), std::move(rewards), 0);
}

int ParityStateIndex(int step, int bit) {
  if (step == 1) {
    if (bit != 0) throw std::invalid_argument("state 1_1 does not exist");
    return 0;
  }
  return 2 * step - 3 + bit;
}

int ParityTerminalState(int n) { return 2 * (n + 1) - 1; }

MarkovGame MakeParityGame(int n) {
  if (n < 1) throw std::invalid_argument("MakeParityGame: n must be >= 1");
  const int horizon = n + 1;
  const int num_states = 2 * horizon;
  const int terminal = ParityTerminalState(n);
  std::vector<double> transitions(
      static_cast<std::size_t>(horizon) * num_states * 4 * num_states, 0.0);
  std::vector<double> rewards(static_cast<std::size_t>(horizon) * num_states *
                                  4,
                              0.0);
  // (step, bit) of every non-terminal state.
  std::vector<std::pair<int, int>> decode(num_states, {0, 0});
  decode[0] = {1, 0};
  for (int i = 2; i <= horizon; ++i) {
    decode[ParityStateIndex(i, 0)] = {i, 0};
    decode[ParityStateIndex(i, 1)] = {i, 1};
  }
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const std::size_t cell = ((static_cast<std::size_t>(h) * num_states +
                                     s) * 2 + a) * 2 + b;
          int next = terminal;
          if (s != terminal) {
            const auto [step, bit] = decode[s];
            if (step < horizon) {
              next = ParityStateIndex(step + 1, kParityNextBit[bit][a][b]);
            }
            if (h == horizon - 1 && step == horizon) {
              rewards[cell] = (bit == b) ? 1.0 : 0.0;
            }
          }
          transitions[cell * num_states + next] = 1.0;
        }
      }
    }
  }
  return MarkovGame(horizon, num_states, 2, 2, std::move(transitions),
                    std::move(rewards), 0);
}

ParityOpponent::ParityOpponent(int n, std::vector<int> subset, double noise)
    : n_(n), subset_(std::move(subset)), noise_(noise), x_(n, 0) {
  if (n < 1) throw std::invalid_argument("ParityOpponent: n must be >= 1");
  if (!(noise >= 0.0 && noise < 0.5)) {
    throw std::invalid_argument("ParityOpponent: noise must be in [0, 1/2)");
  }
  for (int i : subset_) {
    if (i < 1 || i > n) {
      throw std::invalid_argument("ParityOpponent: subset must lie in [1, n]");
    }
  }
}

int ParityOpponent::Parity(const std::vector<int>& x) const {
  int parity = 0;
  for (int i : subset_) parity ^= x[i - 1];
  return parity;
}

void ParityOpponent::Reset(Rng& rng) {
  for (int i = 0; i < n_; ++i) x_[i] = rng.Bernoulli(0.5) ? 1 : 0;
  label_ = Parity(x_) ^ (rng.Bernoulli(noise_) ? 1 : 0);
}

void ParityOpponent::SetDraw(std::vector<int> x, int label) {
  if (static_cast<int>(x.size()) != n_) {
    throw std::invalid_argument("SetDraw: x has wrong length");
  }
  x_ = std::move(x);
  label_ = label;
}

int ParityOpponent::Act(int h, int /*state*/, Rng& /*rng*/) {
  return h < n_ ? x_[h] : label_;
}

MarkovPolicy MakeParityTrackingPolicy(int n, const std::vector<int>& subset) {
  const MarkovGame game = MakeParityGame(n);
  const int horizon = n + 1;
  std::vector<bool> in_subset(horizon + 1, false);
  for (int i : subset) {
    if (i < 1 || i > n) {
      throw std::invalid_argument("tracking policy: subset must lie in [1, n]");
    }
    in_subset[i] = true;
  }
  std::vector<int> actions(static_cast<std::size_t>(horizon) *
                           game.num_states(), 0);
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < game.num_states(); ++s) {
      int bit = 0;
      if (s != 0 && s != ParityTerminalState(n)) bit = (s + 1) % 2;
      const int step = h + 1;
      actions[static_cast<std::size_t>(h) * game.num_states() + s] =
          in_subset[step] ? 1 - bit : bit;
    }
  }
  return MarkovPolicy::Deterministic(Side::kMax, game, actions);
}

}  // namespace nashplay
