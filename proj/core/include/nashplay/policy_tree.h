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
#ifndef NASHPLAY_POLICY_TREE_H_
#define NASHPLAY_POLICY_TREE_H_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nashplay/game.h"
#include "nashplay/rng.h"

namespace nashplay {

// One side of the history-mixture policy a learner certifies. The executor
// starts from a uniformly drawn episode index k in [1, K]; at each step it
// resamples k among the earlier visits of the current cell with the alpha
// weights (cell = state for V-learning, state and joint action for
// Q-learning) and acts with the policy that was in force at episode k.
class CertifiedPolicy {
 public:
  virtual ~CertifiedPolicy() = default;

  virtual Side side() const = 0;
  virtual const MarkovGame& game() const = 0;
  virtual int episodes() const = 0;
  // True if k is resampled on the state before acting, false if it is
  // resampled on the joint action after both players moved.
  virtual bool resamples_before_acting() const = 0;
  // Visits of the resampling cell before episode k. a and b are ignored
  // when resampling is state-keyed.
  virtual int VisitCount(int h, int s, int a, int b, int k) const = 0;
  // Episode of the m-th visit of the resampling cell.
  virtual int VisitEpisode(int h, int s, int a, int b, int m) const = 0;
  // Action law of this side at (h, s) during episode k.
  virtual std::span<const double> ActionProbs(int h, int s, int k) const = 0;

  int num_actions() const { return game().num_actions(side()); }
};

// Draws the next index; keeps k when the cell was never visited before k.
int ResampleIndex(const CertifiedPolicy& policy, int h, int s, int a, int b,
                  int k, Rng& rng);

// Sparse distribution over episode indices, sorted by index.
using IndexBelief = std::vector<std::pair<int, double>>;

IndexBelief UniformIndexBelief(int episodes);
// Exact image of `belief` under ResampleIndex.
IndexBelief ResampleBelief(const CertifiedPolicy& policy, int h, int s, int a,
                           int b, const IndexBelief& belief);

// Episode actor that executes a certified policy. The policy must outlive
// the actor.
class CertifiedPolicyActor : public EpisodeActor {
 public:
  explicit CertifiedPolicyActor(const CertifiedPolicy& policy)
      : policy_(policy) {}

  void Reset(Rng& rng) override;
  int Act(int h, int state, Rng& rng) override;
  void Observe(int h, int state, int max_action, int min_action,
               Rng& rng) override;

  int index() const { return index_; }

 private:
  const CertifiedPolicy& policy_;
  int index_ = 1;
};

class SupportOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Node of the explicit history tree. The belief is the law of the executor's
// index at the moment it acts, given the observed history. Histories with
// equal (h, state, belief) share a node.
struct PolicyTreeNode {
  int h = 0;
  int state = 0;
  IndexBelief belief;
  std::vector<double> action_probs;
  // Indexed by (own * num_opponent_actions + opponent) * S + next_state;
  // -1 if the own action has probability zero or the transition is
  // impossible. Empty at the last step.
  std::vector<int> children;
};

struct PolicyTree {
  Side side = Side::kMax;
  int horizon = 0;
  int num_states = 0;
  int num_own_actions = 0;
  int num_opponent_actions = 0;
  std::vector<PolicyTreeNode> nodes;  // nodes[0] is the root

  int Child(int node, int own, int opponent, int next_state) const {
    return nodes[node].children[(static_cast<std::size_t>(own) *
                                     num_opponent_actions +
                                 opponent) *
                                    num_states +
                                next_state];
  }
};

// Throws SupportOverflow when more than `max_support` nodes are needed.
PolicyTree BuildPolicyTree(const CertifiedPolicy& policy,
                           std::size_t max_support);

}  // namespace nashplay

#endif  // NASHPLAY_POLICY_TREE_H_
