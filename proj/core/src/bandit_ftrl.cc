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
#include "nashplay/bandit_ftrl.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nashplay {

MixedStrategy ExponentialWeights(std::span<const double> losses,
                                 double scale) {
  MixedStrategy p(losses.size());
  double max_exponent = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < losses.size(); ++i) {
    p[i] = -scale * losses[i];
    max_exponent = std::max(max_exponent, p[i]);
  }
  double total = 0.0;
  for (double& v : p) {
    v = std::exp(v - max_exponent);
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

FtrlBandit::FtrlBandit(int num_arms)
    : num_arms_(num_arms), cumulative_(num_arms, 0.0) {
  if (num_arms < 1) throw std::invalid_argument("FtrlBandit: need >= 1 arm");
}

double FtrlBandit::StepSize() const {
  return std::sqrt(std::log(static_cast<double>(num_arms_)) /
                   (static_cast<double>(num_arms_) * round_));
}

MixedStrategy FtrlBandit::Policy(double weight) const {
  if (!(weight > 0.0)) {
    throw std::invalid_argument("FtrlBandit: weight must be positive");
  }
  return ExponentialWeights(cumulative_, StepSize() / weight);
}

std::vector<double> FtrlBandit::Observe(int arm, double loss, double weight) {
  if (arm < 0 || arm >= num_arms_) {
    throw std::invalid_argument("FtrlBandit: illegal arm");
  }
  if (!(loss >= 0.0 && loss <= 1.0)) {
    throw std::invalid_argument("FtrlBandit: loss must be in [0, 1]");
  }
  const MixedStrategy theta = Policy(weight);
  std::vector<double> estimate(num_arms_, 0.0);
  estimate[arm] = loss / (theta[arm] + StepSize());
  cumulative_[arm] += weight * estimate[arm];
  ++round_;
  return estimate;
}

BanditRun RunWeightedBandit(int num_arms, const LossOracle& oracle,
                            std::span<const double> weights, Rng& rng) {
  FtrlBandit bandit(num_arms);
  BanditRun run;
  run.rounds.reserve(weights.size());
  double learner_loss = 0.0;
  std::vector<double> arm_loss(num_arms, 0.0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const int t = static_cast<int>(i) + 1;
    const std::vector<double> means = oracle(t);
    if (static_cast<int>(means.size()) != num_arms) {
      throw std::invalid_argument("RunWeightedBandit: oracle width mismatch");
    }
    MixedStrategy theta = bandit.Policy(weights[i]);
    const int arm = rng.Categorical(theta);
    const double observed = rng.Bernoulli(means[arm]) ? 1.0 : 0.0;
    bandit.Observe(arm, observed, weights[i]);
    for (int a = 0; a < num_arms; ++a) {
      learner_loss += weights[i] * theta[a] * means[a];
      arm_loss[a] += weights[i] * means[a];
    }
    run.rounds.push_back({std::move(theta), arm, observed});
  }
  run.best_arm = static_cast<int>(
      std::min_element(arm_loss.begin(), arm_loss.end()) - arm_loss.begin());
  run.weighted_regret = learner_loss - arm_loss[run.best_arm];
  return run;
}

double WeightedRegretBound(std::span<const double> weights, int num_arms,
                           double iota) {
  const double t = static_cast<double>(weights.size());
  const double a = num_arms;
  double max_w = 0.0, weighted_root = 0.0, squares = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    max_w = std::max(max_w, weights[i]);
    weighted_root += weights[i] / std::sqrt(static_cast<double>(i + 1));
    squares += weights[i] * weights[i];
  }
  return 2.0 * max_w * std::sqrt(a * t * iota) +
         1.5 * std::sqrt(a * iota) * weighted_root + 0.5 * max_w * iota +
         std::sqrt(2.0 * iota * squares);
}

}  // namespace nashplay
