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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "nashplay/rng.h"
#include "nashplay/schedules.h"

namespace nashplay {
namespace {

TEST(ExponentialWeightsTest, ShiftInvariantAndOverflowSafe) {
  const auto p = ExponentialWeights(std::vector<double>{1e6, 1e6 + 1.0}, 1.0);
  EXPECT_NEAR(p[0], 1.0 / (1.0 + std::exp(-1.0)), 1e-12);
  EXPECT_NEAR(p[0] + p[1], 1.0, 1e-15);
  const auto q = ExponentialWeights(std::vector<double>{-1e6, 1e6}, 5.0);
  EXPECT_EQ(q[0], 1.0);
  EXPECT_EQ(q[1], 0.0);
  const auto u = ExponentialWeights(std::vector<double>{3.0, 3.0, 3.0}, 10.0);
  for (double x : u) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
}

TEST(FtrlBanditTest, FirstRoundIsUniform) {
  FtrlBandit bandit(4);
  for (double x : bandit.Policy(0.3)) EXPECT_DOUBLE_EQ(x, 0.25);
  EXPECT_EQ(bandit.round(), 1);
}

TEST(FtrlBanditTest, EqualPastEstimatesGiveUniform) {
  FtrlBandit bandit(2);
  const double gamma1 = bandit.StepSize();
  bandit.Observe(0, 1.0, 1.0);
  const double l0 = 1.0 / (0.5 + gamma1);
  // Same weighted estimate on arm 1 in round two.
  const double theta1 = bandit.Policy(1.0)[1];
  const double needed = l0 * (theta1 + bandit.StepSize());
  ASSERT_LE(needed, 1.0);
  bandit.Observe(1, needed, 1.0);
  const auto p = bandit.Policy(1.0);
  EXPECT_NEAR(p[0], 0.5, 1e-12);
  EXPECT_NEAR(p[1], 0.5, 1e-12);
}

TEST(FtrlBanditTest, SecondRoundPolicyFormula) {
  FtrlBandit bandit(2);
  const double gamma1 = std::sqrt(std::log(2.0) / 2.0);
  // Weight chosen so that the weighted estimate on arm 0 is exactly 1.
  bandit.Observe(0, 1.0, 0.5 + gamma1);
  EXPECT_NEAR(bandit.weighted_estimate_sums()[0], 1.0, 1e-15);
  const double eta2 = std::sqrt(std::log(2.0) / 4.0);
  EXPECT_NEAR(bandit.StepSize(), eta2, 1e-15);
  const auto p = bandit.Policy(1.0);
  const double z = std::exp(-eta2) + 1.0;
  EXPECT_NEAR(p[0], std::exp(-eta2) / z, 1e-15);
  EXPECT_NEAR(p[1], 1.0 / z, 1e-15);
}

TEST(FtrlBanditTest, ImportanceWeightedEstimate) {
  FtrlBandit zero(3);
  for (double x : zero.Observe(1, 0.0, 1.0)) EXPECT_EQ(x, 0.0);

  FtrlBandit bandit(2);
  const auto estimate = bandit.Observe(0, 1.0, 1.0);
  EXPECT_NEAR(estimate[0], 1.0 / (0.5 + 0.58871), 1e-5);
  EXPECT_NEAR(estimate[0], 0.91853, 1e-5);
  EXPECT_EQ(estimate[1], 0.0);
  EXPECT_EQ(bandit.round(), 2);
}

TEST(FtrlBanditTest, RejectsBadInput) {
  FtrlBandit bandit(2);
  EXPECT_ANY_THROW(bandit.Observe(0, 1.5, 1.0));
  EXPECT_ANY_THROW(bandit.Observe(2, 0.5, 1.0));
  EXPECT_ANY_THROW(bandit.Policy(0.0));
}

TEST(FtrlBanditTest, EstimateUnderestimatesInExpectation) {
  Rng rng(12);
  const std::vector<double> losses = {0.9, 0.4, 0.7};
  std::vector<double> mean(3, 0.0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    FtrlBandit bandit(3);
    const auto theta = bandit.Policy(1.0);
    const int arm = rng.Categorical(theta);
    const auto estimate = bandit.Observe(arm, losses[arm], 1.0);
    for (int a = 0; a < 3; ++a) mean[a] += estimate[a] / n;
  }
  const double gamma = std::sqrt(std::log(3.0) / 3.0);
  for (int a = 0; a < 3; ++a) {
    const double expected = (1.0 / 3) * losses[a] / (1.0 / 3 + gamma);
    EXPECT_NEAR(mean[a], expected, 0.005);
    EXPECT_LT(mean[a], losses[a]);
  }
}

TEST(RunWeightedBanditTest, ReplayIsDeterministic) {
  const std::vector<double> weights(200, 1.0);
  auto oracle = [](int t) { return std::vector<double>{0.3, t % 3 == 0 ? 0.1 : 0.6}; };
  Rng r1(4), r2(4);
  const BanditRun a = RunWeightedBandit(2, oracle, weights, r1);
  const BanditRun b = RunWeightedBandit(2, oracle, weights, r2);
  ASSERT_EQ(a.rounds.size(), 200u);
  for (int i = 0; i < 200; ++i) {
    EXPECT_EQ(a.rounds[i].theta, b.rounds[i].theta);
    EXPECT_EQ(a.rounds[i].arm, b.rounds[i].arm);
  }
  EXPECT_EQ(a.weighted_regret, b.weighted_regret);
}

TEST(RunWeightedBanditTest, EqualLossesHaveNoRegret) {
  const std::vector<double> weights(500, 0.7);
  Rng rng(6);
  const BanditRun run = RunWeightedBandit(
      3, [](int) { return std::vector<double>(3, 0.5); }, weights, rng);
  EXPECT_NEAR(run.weighted_regret, 0.0, 1e-9);
}

TEST(RunWeightedBanditTest, StochasticRegretBelowBound) {
  const int K = 2000, A = 2;
  const auto w = ComputeAlphaWeights(K, 2).weights;
  const double iota = std::log(A * K / 0.05);
  const double bound = WeightedRegretBound(w, A, iota);
  double mean = 0.0;
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(DeriveSeed(77, seed));
    mean += RunWeightedBandit(
                A, [](int) { return std::vector<double>{0.2, 0.8}; }, w, rng)
                .weighted_regret /
            20;
  }
  EXPECT_LE(mean, bound);
}

TEST(RunWeightedBanditTest, AlternatingRegretBelowBound) {
  const int K = 2000, A = 2;
  const std::vector<double> w(K, 1.0);
  const double iota = std::log(A * K / 0.05);
  const double bound = WeightedRegretBound(w, A, iota);
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(DeriveSeed(78, seed));
    const BanditRun run = RunWeightedBandit(
        A,
        [](int t) {
          return std::vector<double>{static_cast<double>(t % 2),
                                     static_cast<double>(1 - t % 2)};
        },
        w, rng);
    EXPECT_LE(run.weighted_regret, bound);
  }
}

TEST(WeightedRegretBoundTest, Formula) {
  const std::vector<double> w = {0.5, 1.0};
  const double iota = 3.0;
  const double expected = 2.0 * 1.0 * std::sqrt(2 * 2 * iota) +
                          1.5 * std::sqrt(2 * iota) * (0.5 + 1.0 / std::sqrt(2.0)) +
                          0.5 * 1.0 * iota + std::sqrt(2 * iota * 1.25);
  EXPECT_NEAR(WeightedRegretBound(w, 2, iota), expected, 1e-12);
}

}  // namespace
}  // namespace nashplay
