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
#ifndef NASHPLAY_BANDIT_FTRL_H_
#define NASHPLAY_BANDIT_FTRL_H_

#include <functional>
#include <span>
#include <vector>

#include "nashplay/matrix_game.h"
#include "nashplay/rng.h"

namespace nashplay {

// p(a) proportional to exp(-scale * losses[a]), evaluated with the maximum
// exponent subtracted so large accumulators do not overflow.
MixedStrategy ExponentialWeights(std::span<const double> losses, double scale);

// Exponential-weights bandit with weighted regret and changing step size:
//   theta_t(a) ~ exp(-(eta_t / w_t) * sum_{i<t} w_i lhat_i(a)),
//   lhat_t(a) = loss * 1{a_t = a} / (theta_t(a) + gamma_t),
// with eta_t = gamma_t = sqrt(log A / (A t)). Losses live in [0, 1].
class FtrlBandit {
 public:
  explicit FtrlBandit(int num_arms);

  int num_arms() const { return num_arms_; }
  int round() const { return round_; }
  double StepSize() const;

  // theta_t for the current round given its weight w_t > 0.
  MixedStrategy Policy(double weight) const;

  // Records the loss of the played arm for the current round and advances
  // the round counter. Returns the importance-weighted estimate lhat_t.
  std::vector<double> Observe(int arm, double loss, double weight);

  const std::vector<double>& weighted_estimate_sums() const {
    return cumulative_;
  }

 private:
  int num_arms_;
  int round_ = 1;
  std::vector<double> cumulative_;  // sum_{i<t} w_i lhat_i(a)
};

// Mean loss vector at round t (1-based); observed losses are Bernoulli draws
// with these means.
using LossOracle = std::function<std::vector<double>(int round)>;

struct BanditRound {
  MixedStrategy theta;
  int arm;
  double observed_loss;
};

struct BanditRun {
  std::vector<BanditRound> rounds;
  // sum_i w_i <theta_i - theta*, l_i> against the best fixed arm.
  double weighted_regret = 0.0;
  int best_arm = 0;
};

BanditRun RunWeightedBandit(int num_arms, const LossOracle& oracle,
                            std::span<const double> weights, Rng& rng);

// High-probability weighted-regret bound at t = weights.size():
//   2 max w sqrt(A t iota) + 1.5 sqrt(A iota) sum w_i / sqrt(i)
//   + 0.5 max w iota + sqrt(2 iota sum w_i^2).
double WeightedRegretBound(std::span<const double> weights, int num_arms,
                           double iota);

}  // namespace nashplay

#endif  // NASHPLAY_BANDIT_FTRL_H_
