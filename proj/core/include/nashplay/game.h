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
#ifndef NASHPLAY_GAME_H_
#define NASHPLAY_GAME_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nashplay/rng.h"

namespace nashplay {

enum class Side { kMax, kMin };

inline Side Opponent(Side side) {
  return side == Side::kMax ? Side::kMin : Side::kMax;
}
const char* SideName(Side side);

// Tabular episodic two-player zero-sum Markov game. Steps are zero-based
// (h = 0 .. H-1); the max player's actions index rows, the min player's
// columns. Transitions are stored row-major as [h][s][a][b][s'] and rewards
// as [h][s][a][b].
class MarkovGame {
 public:
  MarkovGame(int horizon, int num_states, int num_max_actions,
             int num_min_actions, std::vector<double> transitions,
             std::vector<double> rewards, int initial_state);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_max_actions() const { return num_max_actions_; }
  int num_min_actions() const { return num_min_actions_; }
  int num_actions(Side side) const {
    return side == Side::kMax ? num_max_actions_ : num_min_actions_;
  }
  int initial_state() const { return initial_state_; }

  double reward(int h, int s, int a, int b) const {
    return rewards_[CellIndex(h, s, a, b)];
  }
  std::span<const double> next_state_distribution(int h, int s, int a,
                                                  int b) const {
    return {transitions_.data() + CellIndex(h, s, a, b) * num_states_,
            static_cast<std::size_t>(num_states_)};
  }

  // Flat index of the (h, s, a, b) cell.
  std::size_t CellIndex(int h, int s, int a, int b) const {
    return ((static_cast<std::size_t>(h) * num_states_ + s) *
                num_max_actions_ +
            a) * num_min_actions_ +
           b;
  }
  std::size_t num_cells() const {
    return static_cast<std::size_t>(horizon_) * num_states_ *
           num_max_actions_ * num_min_actions_;
  }

  const std::vector<double>& transitions() const { return transitions_; }
  const std::vector<double>& rewards() const { return rewards_; }

 private:
  int horizon_;
  int num_states_;
  int num_max_actions_;
  int num_min_actions_;
  std::vector<double> transitions_;
  std::vector<double> rewards_;
  int initial_state_;
};

bool operator==(const MarkovGame& lhs, const MarkovGame& rhs);

struct ValidationIssue {
  int h, s, a, b;
  std::string message;
};

// All invariant violations; empty when the game is well formed.
std::vector<ValidationIssue> ValidateGame(const MarkovGame& game);

// Per-(h, s) action distribution of one player.
class MarkovPolicy {
 public:
  MarkovPolicy(Side side, int horizon, int num_states, int num_actions,
               std::vector<double> probs);
  static MarkovPolicy Uniform(Side side, const MarkovGame& game);
  static MarkovPolicy Deterministic(Side side, const MarkovGame& game,
                                    const std::vector<int>& actions);

  Side side() const { return side_; }
  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  std::span<const double> row(int h, int s) const {
    return {probs_.data() + RowOffset(h, s),
            static_cast<std::size_t>(num_actions_)};
  }
  std::span<double> mutable_row(int h, int s) {
    return {probs_.data() + RowOffset(h, s),
            static_cast<std::size_t>(num_actions_)};
  }

 private:
  std::size_t RowOffset(int h, int s) const {
    return (static_cast<std::size_t>(h) * num_states_ + s) * num_actions_;
  }

  Side side_;
  int horizon_, num_states_, num_actions_;
  std::vector<double> probs_;
};

// Per-(h, s) distribution over action pairs, row-major (a, b).
class MarkovJointPolicy {
 public:
  MarkovJointPolicy(int horizon, int num_states, int num_max_actions,
                    int num_min_actions, std::vector<double> probs);
  static MarkovJointPolicy Uniform(const MarkovGame& game);

  int num_max_actions() const { return num_max_actions_; }
  int num_min_actions() const { return num_min_actions_; }
  std::span<const double> row(int h, int s) const {
    return {probs_.data() + RowOffset(h, s), RowSize()};
  }
  std::span<double> mutable_row(int h, int s) {
    return {probs_.data() + RowOffset(h, s), RowSize()};
  }

 private:
  std::size_t RowSize() const {
    return static_cast<std::size_t>(num_max_actions_) * num_min_actions_;
  }
  std::size_t RowOffset(int h, int s) const {
    return (static_cast<std::size_t>(h) * num_states_ + s) * RowSize();
  }

  int horizon_, num_states_, num_max_actions_, num_min_actions_;
  std::vector<double> probs_;
};

// True if `row` is nonnegative and sums to one within `tolerance`.
bool IsSimplex(std::span<const double> row, double tolerance);

struct Step {
  int state;
  int max_action;
  int min_action;
  double reward;
};

struct Trajectory {
  std::vector<Step> steps;  // exactly H entries
  int terminal_state = -1;  // s_{H+1}
  double Return() const;
};

// A stateful, possibly history-dependent player. Reset is called at the
// start of every episode; Act picks the actor's action at step h; Observe
// reports the realized action pair after both players moved.
class EpisodeActor {
 public:
  virtual ~EpisodeActor() = default;
  virtual void Reset(Rng& rng) = 0;
  virtual int Act(int h, int state, Rng& rng) = 0;
  virtual void Observe(int /*h*/, int /*state*/, int /*max_action*/,
                       int /*min_action*/, Rng& /*rng*/) {}
};

// Adapts a Markov policy to the actor interface.
class MarkovPolicyActor : public EpisodeActor {
 public:
  explicit MarkovPolicyActor(const MarkovPolicy& policy) : policy_(policy) {}
  void Reset(Rng&) override {}
  int Act(int h, int state, Rng& rng) override;

 private:
  const MarkovPolicy& policy_;
};

// Random draws per step happen in a fixed order: max actor, min actor, next
// state. Identical generator state therefore yields identical trajectories.
Trajectory SampleEpisode(const MarkovGame& game, EpisodeActor& max_actor,
                         EpisodeActor& min_actor, Rng& rng);
Trajectory SampleEpisode(const MarkovGame& game, const MarkovPolicy& mu,
                         const MarkovPolicy& nu, Rng& rng);
Trajectory SampleEpisode(const MarkovGame& game,
                         const MarkovJointPolicy& policy, Rng& rng);

// Transitions drawn from a symmetric Dirichlet(1, ..., 1), rewards uniform
// on [0, 1], initial state 0.
MarkovGame MakeRandomGame(int horizon, int num_states, int num_max_actions,
                          int num_min_actions, Rng& rng);

// Parity hard instance with n informative steps, so H = n + 1. States are
// laid out as [1_0, 2_0, 2_1, ..., H_0, H_1, terminal].
MarkovGame MakeParityGame(int n);

int ParityStateIndex(int step, int bit);  // step is 1-based, as in i_b
int ParityTerminalState(int n);

// Min player of the parity instance. At reset draws x uniform on {0,1}^n and
// label y = parity of x on `subset`, flipped with probability `noise`;
// plays b_{x_h} at the first n steps and b_y at the last one.
class ParityOpponent : public EpisodeActor {
 public:
  ParityOpponent(int n, std::vector<int> subset, double noise);

  void Reset(Rng& rng) override;
  int Act(int h, int state, Rng& rng) override;

  // Fixes the hidden draw; used by exact enumeration in tests.
  void SetDraw(std::vector<int> x, int label);
  const std::vector<int>& x() const { return x_; }
  int label() const { return label_; }
  int Parity(const std::vector<int>& x) const;

 private:
  int n_;
  std::vector<int> subset_;  // 1-based step indices
  double noise_;
  std::vector<int> x_;
  int label_ = 0;
};

// Max-player Markov policy for the parity instance that tracks the parity of
// x on `subset`: on steps in the subset it plays the action that makes the
// state bit flip exactly when b_1 is observed, elsewhere the one that keeps
// the bit.
MarkovPolicy MakeParityTrackingPolicy(int n, const std::vector<int>& subset);

}  // namespace nashplay

#endif  // NASHPLAY_GAME_H_
