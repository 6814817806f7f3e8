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
#ifndef NASHPLAY_EVALUATION_H_
#define NASHPLAY_EVALUATION_H_

#include <cstddef>
#include <vector>

#include "nashplay/game.h"
#include "nashplay/policy_tree.h"
#include "nashplay/rng.h"

namespace nashplay {

// V over (h, s) for h = 0..H (V_H = 0) and optionally Q over (h, s, a, b).
struct ValueTable {
  int horizon = 0;
  int num_states = 0;
  int num_max_actions = 0;
  int num_min_actions = 0;
  std::vector<double> v;
  std::vector<double> q;  // empty when absent

  static ValueTable ForGame(const MarkovGame& game, bool with_q);
  double V(int h, int s) const {
    return v[static_cast<std::size_t>(h) * num_states + s];
  }
  double& V(int h, int s) {
    return v[static_cast<std::size_t>(h) * num_states + s];
  }
  double Q(int h, int s, int a, int b) const { return q[QIndex(h, s, a, b)]; }
  double& Q(int h, int s, int a, int b) { return q[QIndex(h, s, a, b)]; }
  bool has_q() const { return !q.empty(); }

 private:
  std::size_t QIndex(int h, int s, int a, int b) const {
    return ((static_cast<std::size_t>(h) * num_states + s) * num_max_actions +
            a) * num_min_actions +
           b;
  }
};

// max over cells of |Q - (r + P V_{h+1})|; requires Q.
double BellmanResidual(const MarkovGame& game, const ValueTable& table);

struct NashSolution {
  ValueTable values;  // V*, Q*
  MarkovPolicy max_policy;
  MarkovPolicy min_policy;
};
NashSolution SolveMarkovGame(const MarkovGame& game);
ValueTable NashValueOracle(const MarkovGame& game);

// Deterministic best response of the opponent of `policy`; ties go to the
// lowest action index. values holds V^{mu,dagger} (or V^{dagger,nu}) and Q.
struct BestResponse {
  MarkovPolicy response;
  ValueTable values;
};
BestResponse BestResponseToMarkov(const MarkovGame& game,
                                  const MarkovPolicy& policy);

ValueTable FixedPairValue(const MarkovGame& game, const MarkovPolicy& mu,
                          const MarkovPolicy& nu);

// Best response of the opposite side to a certified-policy tree: a pure
// action per tree node, lowest index on ties.
struct TreeBestResponse {
  double value = 0.0;
  std::vector<double> node_values;
  std::vector<int> actions;
};
TreeBestResponse BestResponseToTree(const MarkovGame& game,
                                    const PolicyTree& tree);

struct Exploitability {
  double exploitability = 0.0;  // V^{dagger,nu} - V^{mu,dagger}
  double max_response_value = 0.0;  // V^{dagger,nu}
  double min_response_value = 0.0;  // V^{mu,dagger}
  TreeBestResponse max_response;    // against tree_nu
  TreeBestResponse min_response;    // against tree_mu
};
Exploitability ExploitabilityExact(const MarkovGame& game,
                                   const PolicyTree& tree_mu,
                                   const PolicyTree& tree_nu);

// Exact value of the certified pair.
double TreePairValue(const MarkovGame& game, const PolicyTree& tree_mu,
                     const PolicyTree& tree_nu);
// Exact value of a certified policy against a Markov opponent.
double TreeVsMarkovValue(const MarkovGame& game, const PolicyTree& tree,
                         const MarkovPolicy& opponent);
// P(own action at step h = a) against a Markov opponent, indexed [h][a].
std::vector<std::vector<double>> TreeActionMarginals(
    const MarkovGame& game, const PolicyTree& tree,
    const MarkovPolicy& opponent);

// Plays a tree best response. The tree and response must outlive the actor.
class TreeResponseActor : public EpisodeActor {
 public:
  TreeResponseActor(const PolicyTree& tree, const TreeBestResponse& response)
      : tree_(tree), response_(response) {}

  void Reset(Rng&) override;
  int Act(int h, int state, Rng& rng) override;
  void Observe(int h, int state, int max_action, int min_action,
               Rng& rng) override;

 private:
  const PolicyTree& tree_;
  const TreeBestResponse& response_;
  int node_ = 0;
  bool pending_ = false;
  int own_ = 0, opponent_ = 0;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long long episodes = 0;
};

// Monte Carlo mean return of a pair of actors.
McEstimate PairValueMc(const MarkovGame& game, EpisodeActor& max_actor,
                       EpisodeActor& min_actor, long long episodes, Rng& rng);

// V(max_response, nu) - V(mu, min_response) by simulation. With any fixed
// responders this is a lower bound on the exploitability of (mu, nu), up to
// sampling error.
McEstimate ExploitabilityMc(const MarkovGame& game, EpisodeActor& mu,
                            EpisodeActor& nu, EpisodeActor& max_response,
                            EpisodeActor& min_response, long long episodes,
                            Rng& rng);

}  // namespace nashplay

#endif  // NASHPLAY_EVALUATION_H_
