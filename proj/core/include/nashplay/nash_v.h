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
#ifndef NASHPLAY_NASH_V_H_
#define NASHPLAY_NASH_V_H_

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

struct NashVHistory {
  NashVHistory(MarkovGame game_in, Hyperparams hp_in)
      : game(std::move(game_in)), hp(hp_in) {}

  MarkovGame game;
  Hyperparams hp;
  int episodes = 0;
  VisitLog visits;  // keyed by h * S + s, shared by both sides
  PolicyLog max_policy;
  PolicyLog min_policy;
  std::vector<double> upper_trace;  // at the beginning of each episode
  std::vector<double> lower_trace;
  std::vector<Trajectory> trajectories;
  // Updates where the ceiling (max side) or the floor (min side) was hit.
  long long upper_clip_events = 0;
  long long lower_clip_events = 0;

  std::size_t StateKey(int h, int s) const {
    return static_cast<std::size_t>(h) * game.num_states() + s;
  }
  int VisitCount(int h, int s, int k) const {
    return visits.CountBefore(StateKey(h, s), k);
  }
  int VisitEpisode(int h, int s, int m) const {
    return visits.Episode(StateKey(h, s), m);
  }
  std::span<const double> Policy(Side side, int h, int s, int k) const {
    return (side == Side::kMax ? max_policy : min_policy).RowAt(h, s, k);
  }
};

// Both players run optimistic V-learning with bandit FTRL at every state,
// updated from the same self-play trajectory.
class NashVLearner {
 public:
  NashVLearner(const MarkovGame& game, const Hyperparams& hp);

  void RunEpisode(Rng& rng);

  int episodes_completed() const { return history_.episodes; }
  // h ranges over [0, H]; step H is terminal with value 0.
  double upper_v(int h, int s) const { return upper_v_[h * S() + s]; }
  double lower_v(int h, int s) const { return lower_v_[h * S() + s]; }
  int count(int h, int s) const { return count_[h * S() + s]; }
  // Accumulated weighted loss L(h, s, action) of one side.
  double loss(Side side, int h, int s, int action) const;
  std::span<const double> policy(Side side, int h, int s) const;

  const MarkovGame& game() const { return history_.game; }
  const NashVHistory& history() const { return history_; }
  NashVHistory TakeHistory() && { return std::move(history_); }

 private:
  int S() const { return game().num_states(); }
  void Update(int h, int s, int a, int b, double r, int next_state);

  NashVHistory history_;
  std::vector<double> upper_v_, lower_v_;
  std::vector<int> count_;
  std::vector<double> max_loss_, min_loss_;      // (h, s, action)
  std::vector<double> max_policy_, min_policy_;  // (h, s, action)
};

NashVHistory RunNashV(const MarkovGame& game, const Hyperparams& hp,
                      int episodes, Rng& rng);

// Certified policy of one side of a Nash V-learning run. Keeps a reference
// to the history.
class NashVCertifiedPolicy : public CertifiedPolicy {
 public:
  NashVCertifiedPolicy(const NashVHistory& history, Side side)
      : history_(history), side_(side) {}

  Side side() const override { return side_; }
  const MarkovGame& game() const override { return history_.game; }
  int episodes() const override { return history_.episodes; }
  bool resamples_before_acting() const override { return true; }
  int VisitCount(int h, int s, int, int, int k) const override {
    return history_.VisitCount(h, s, k);
  }
  int VisitEpisode(int h, int s, int, int, int m) const override {
    return history_.VisitEpisode(h, s, m);
  }
  std::span<const double> ActionProbs(int h, int s, int k) const override {
    return history_.Policy(side_, h, s, k);
  }

 private:
  const NashVHistory& history_;
  Side side_;
};

inline PolicyTree CertifiedPolicyTreeV(const NashVHistory& history, Side side,
                                       std::size_t max_support) {
  return BuildPolicyTree(NashVCertifiedPolicy(history, side), max_support);
}

}  // namespace nashplay

#endif  // NASHPLAY_NASH_V_H_
