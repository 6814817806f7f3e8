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
#ifndef NASHPLAY_SCHEDULES_H_
#define NASHPLAY_SCHEDULES_H_

#include <optional>
#include <vector>

#include "nashplay/game.h"
#include "nashplay/rng.h"

namespace nashplay {

struct Hyperparams {
  int horizon = 1;
  int num_states = 1;
  int num_max_actions = 1;
  int num_min_actions = 1;
  int episodes = 1;      // K
  double c = 2.0;        // bonus constant
  double p = 0.01;       // failure probability
  double iota = 0.0;     // log(S A B T / p)

  // T defaults to K * H total steps.
  static Hyperparams For(const MarkovGame& game, int episodes, double c = 2.0,
                         double p = 0.01,
                         std::optional<double> total_steps = std::nullopt);
  void Validate() const;
};

double Iota(int num_states, int num_max_actions, int num_min_actions,
            double total_steps, double p);

// Learning rate (H + 1) / (H + t), t >= 1.
double Alpha(int t, int horizon);

// alpha_t^0 = prod_{j<=t} (1 - alpha_j) and
// alpha_t^i = alpha_i prod_{j=i+1}^{t} (1 - alpha_j); weights[i-1] holds i.
struct AlphaWeights {
  double alpha0;
  std::vector<double> weights;
};
AlphaWeights ComputeAlphaWeights(int t, int horizon);

// Draws m in [1, t] with P(m = i) = alpha_t^i.
int SampleAlphaIndex(int t, int horizon, Rng& rng);

// Q-learning bonus c * sqrt(H^3 iota / t).
double BetaQ(int t, const Hyperparams& hp);
// V-learning bonus c * sqrt(n H^4 iota / t), n the side's action count.
double BetaV(int t, Side side, const Hyperparams& hp);
// V-learning step size / implicit exploration sqrt(log n / (n t)).
double EtaV(int t, Side side, const Hyperparams& hp);

}  // namespace nashplay

#endif  // NASHPLAY_SCHEDULES_H_
