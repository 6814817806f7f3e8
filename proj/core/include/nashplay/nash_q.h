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
#ifndef NASHPLAY_NASH_Q_H_
#define NASHPLAY_NASH_Q_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "nashplay/game.h"
#include "nashplay/learner_log.h"
#include "nashplay/policy_tree.h"
#include "nashplay/rng.h"
#include "nashplay/schedules.h"

namespace nashplay {

// Everything needed to replay the certified policy of a Nash Q-learning run.
struct NashQHistory {
  NashQHistory(MarkovGame game_in, Hyperparams hp_in)
      : game(std::move(game_in)), hp(hp_in) {}

  MarkovGame game;
  Hyperparams hp;
  int episodes = 0;
  VisitLog visits;          // keyed by MarkovGame::CellIndex
  PolicyLog joint_policy;   // rows over (a, b), row-major
  PolicyLog max_marginal;   // derived from joint_policy
  PolicyLog min_marginal;
  // V̄_1(s_1), V̲_1(s_1) at the beginning of each episode k = 1..K.
  std::vector<double> upper_trace;
  std::vector<double> lower_trace;
  std::vector<Trajectory> trajectories;

  // N_h^k(s, a, b): visits before episode k.
  int VisitCount(int h, int s, int a, int b, int k) const {
    return visits.CountBefore(game.CellIndex(h, s, a, b), k);
  }
  // k_h^m(s, a, b), m is 1-based.
  int VisitEpisode(int h, int s, int a, int b, int m) const {
    return visits.Episode(game.CellIndex(h, s, a, b), m);
  }
  std::span<const double> JointPolicy(int h, int s, int k) const {
    return joint_policy.RowAt(h, s, k);
  }
  std::span<const double> Marginal(Side side, int h, int s, int k) const {
    return (side == Side::kMax ? max_marginal : min_marginal).RowAt(h, s, k);
  }
};

class NashQLearner {
 public:
  NashQLearner(const MarkovGame& game, const Hyperparams& hp);

  // Plays one episode with the current joint policy and updates.
  void RunEpisode(Rng& rng);

  int episodes_completed() const { return history_.episodes; }
  double upper_q(int h, int s, int a, int b) const {
    return upper_q_[game().CellIndex(h, s, a, b)];
  }
  double lower_q(int h, int s, int a, int b) const {
    return lower_q_[game().CellIndex(h, s, a, b)];
  }
  int count(int h, int s, int a, int b) const {
    return count_[game().CellIndex(h, s, a, b)];
  }
  // h ranges over [0, H]; step H is the terminal layer with value 0.
  double upper_v(int h, int s) const { return upper_v_[h * S() + s]; }
  double lower_v(int h, int s) const { return lower_v_[h * S() + s]; }
  const MarkovJointPolicy& policy() const { return policy_; }

  const MarkovGame& game() const { return history_.game; }
  const NashQHistory& history() const { return history_; }
  NashQHistory TakeHistory() && { return std::move(history_); }

 private:
  int S() const { return game().num_states(); }
  void Update(int h, int s, int a, int b, double r, int next_state);

  NashQHistory history_;
  double sanity_cap_;
  std::vector<double> upper_q_, lower_q_;
  std::vector<int> count_;
  std::vector<double> upper_v_, lower_v_;
  MarkovJointPolicy policy_;
};

NashQHistory RunNashQ(const MarkovGame& game, const Hyperparams& hp,
                      int episodes, Rng& rng);

// Certified policy of one side of a Nash Q-learning run. Keeps a reference
// to the history.
class NashQCertifiedPolicy : public CertifiedPolicy {
 public:
  NashQCertifiedPolicy(const NashQHistory& history, Side side)
      : history_(history), side_(side) {}

  Side side() const override { return side_; }
  const MarkovGame& game() const override { return history_.game; }
  int episodes() const override { return history_.episodes; }
  bool resamples_before_acting() const override { return false; }
  int VisitCount(int h, int s, int a, int b, int k) const override {
    return history_.VisitCount(h, s, a, b, k);
  }
  int VisitEpisode(int h, int s, int a, int b, int m) const override {
    return history_.VisitEpisode(h, s, a, b, m);
  }
  std::span<const double> ActionProbs(int h, int s, int k) const override {
    return history_.Marginal(side_, h, s, k);
  }

 private:
  const NashQHistory& history_;
  Side side_;
};

inline PolicyTree CertifiedPolicyTreeQ(const NashQHistory& history, Side side,
                                       std::size_t max_support) {
  return BuildPolicyTree(NashQCertifiedPolicy(history, side), max_support);
}

}  // namespace nashplay

#endif  // NASHPLAY_NASH_Q_H_
