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
#include "nashplay/policy_tree.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <tuple>

#include "nashplay/schedules.h"

namespace nashplay {
namespace {

constexpr double kBeliefTolerance = 1e-12;

bool SameBelief(const IndexBelief& lhs, const IndexBelief& rhs) {
  if (lhs.size() != rhs.size()) return false;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i].first != rhs[i].first) return false;
    if (std::abs(lhs[i].second - rhs[i].second) > kBeliefTolerance) {
      return false;
    }
  }
  return true;
}

std::vector<double> MixActions(const CertifiedPolicy& policy, int h, int s,
                               const IndexBelief& belief) {
  std::vector<double> probs(policy.num_actions(), 0.0);
  for (const auto& [k, weight] : belief) {
    auto row = policy.ActionProbs(h, s, k);
    for (std::size_t a = 0; a < probs.size(); ++a) probs[a] += weight * row[a];
  }
  return probs;
}

// Belief conditioned on the certified side having played `own`.
IndexBelief Condition(const CertifiedPolicy& policy, int h, int s, int own,
                      const IndexBelief& belief) {
  IndexBelief out;
  double total = 0.0;
  for (const auto& [k, weight] : belief) {
    const double w = weight * policy.ActionProbs(h, s, k)[own];
    if (w > 0.0) {
      out.emplace_back(k, w);
      total += w;
    }
  }
  for (auto& entry : out) entry.second /= total;
  return out;
}

}  // namespace

int ResampleIndex(const CertifiedPolicy& policy, int h, int s, int a, int b,
                  int k, Rng& rng) {
  const int t = policy.VisitCount(h, s, a, b, k);
  if (t == 0) return k;
  const int m = SampleAlphaIndex(t, policy.game().horizon(), rng);
  return policy.VisitEpisode(h, s, a, b, m);
}

IndexBelief UniformIndexBelief(int episodes) {
  IndexBelief belief;
  belief.reserve(episodes);
  for (int k = 1; k <= episodes; ++k) {
    belief.emplace_back(k, 1.0 / episodes);
  }
  return belief;
}

IndexBelief ResampleBelief(const CertifiedPolicy& policy, int h, int s, int a,
                           int b, const IndexBelief& belief) {
  const int horizon = policy.game().horizon();
  std::map<int, double> out;
  // mass[t] collects the probability of indices whose cell count is t.
  std::vector<double> mass;
  for (const auto& [k, weight] : belief) {
    const int t = policy.VisitCount(h, s, a, b, k);
    if (t == 0) {
      out[k] += weight;
      continue;
    }
    if (static_cast<int>(mass.size()) <= t) mass.resize(t + 1, 0.0);
    mass[t] += weight;
  }
  // sum_t mass[t] alpha_t^m = alpha_m G_m with
  // G_m = mass[m] + (1 - alpha_{m+1}) G_{m+1}.
  double g = 0.0;
  for (int m = static_cast<int>(mass.size()) - 1; m >= 1; --m) {
    g = mass[m] + (1.0 - Alpha(m + 1, horizon)) * g;
    const double w = Alpha(m, horizon) * g;
    if (w > 0.0) out[policy.VisitEpisode(h, s, a, b, m)] += w;
  }
  return IndexBelief(out.begin(), out.end());
}

void CertifiedPolicyActor::Reset(Rng& rng) {
  index_ = 1 + rng.UniformInt(policy_.episodes());
}

int CertifiedPolicyActor::Act(int h, int state, Rng& rng) {
  if (policy_.resamples_before_acting()) {
    index_ = ResampleIndex(policy_, h, state, 0, 0, index_, rng);
  }
  return rng.Categorical(policy_.ActionProbs(h, state, index_));
}

void CertifiedPolicyActor::Observe(int h, int state, int max_action,
                                   int min_action, Rng& rng) {
  if (!policy_.resamples_before_acting()) {
    index_ = ResampleIndex(policy_, h, state, max_action, min_action, index_,
                           rng);
  }
}

PolicyTree BuildPolicyTree(const CertifiedPolicy& policy,
                           std::size_t max_support) {
  const MarkovGame& game = policy.game();
  const Side side = policy.side();
  PolicyTree tree;
  tree.side = side;
  tree.horizon = game.horizon();
  tree.num_states = game.num_states();
  tree.num_own_actions = game.num_actions(side);
  tree.num_opponent_actions = game.num_actions(Opponent(side));
  const bool before = policy.resamples_before_acting();

  // Nodes sharing (h, state, support size, first index) are candidates for
  // merging.
  std::map<std::tuple<int, int, std::size_t, int>, std::vector<int>> buckets;
  auto intern = [&](int h, int s, IndexBelief belief) {
    const auto key = std::make_tuple(h, s, belief.size(),
                                     belief.empty() ? 0 : belief[0].first);
    auto& bucket = buckets[key];
    for (int id : bucket) {
      if (SameBelief(tree.nodes[id].belief, belief)) return id;
    }
    if (tree.nodes.size() >= max_support) {
      throw SupportOverflow("policy tree exceeds " +
                            std::to_string(max_support) + " nodes");
    }
    PolicyTreeNode node;
    node.h = h;
    node.state = s;
    node.action_probs = MixActions(policy, h, s, belief);
    node.belief = std::move(belief);
    tree.nodes.push_back(std::move(node));
    const int id = static_cast<int>(tree.nodes.size()) - 1;
    bucket.push_back(id);
    return id;
  };

  const int s1 = game.initial_state();
  IndexBelief root = UniformIndexBelief(policy.episodes());
  if (before) root = ResampleBelief(policy, 0, s1, 0, 0, root);
  intern(0, s1, std::move(root));

  const int num_states = game.num_states();
  for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
    const int h = tree.nodes[id].h;
    if (h + 1 >= game.horizon()) continue;
    const int s = tree.nodes[id].state;
    std::vector<int> children(static_cast<std::size_t>(tree.num_own_actions) *
                                  tree.num_opponent_actions * num_states,
                              -1);
    for (int own = 0; own < tree.num_own_actions; ++own) {
      if (tree.nodes[id].action_probs[own] <= 0.0) continue;
      const IndexBelief conditioned =
          Condition(policy, h, s, own, tree.nodes[id].belief);
      for (int opp = 0; opp < tree.num_opponent_actions; ++opp) {
        const int a = side == Side::kMax ? own : opp;
        const int b = side == Side::kMax ? opp : own;
        IndexBelief after = before ? conditioned
                                   : ResampleBelief(policy, h, s, a, b,
                                                    conditioned);
        auto next = game.next_state_distribution(h, s, a, b);
        for (int s2 = 0; s2 < num_states; ++s2) {
          if (next[s2] <= 0.0) continue;
          IndexBelief acting =
              before ? ResampleBelief(policy, h + 1, s2, 0, 0, after) : after;
          const int child = intern(h + 1, s2, std::move(acting));
          children[(static_cast<std::size_t>(own) * tree.num_opponent_actions +
                    opp) *
                       num_states +
                   s2] = child;
        }
      }
    }
    tree.nodes[id].children = std::move(children);
  }
  return tree;
}

}  // namespace nashplay
