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


#include "nashplay/nash_v.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "nashplay/bandit_ftrl.h"
#include "nashplay/rng.h"
#include "nashplay/schedules.h"

namespace nashplay {
namespace {

MarkovGame RandomGame(int H, int S, int A, int B, std::uint64_t seed) {
  Rng rng(seed);
  return MakeRandomGame(H, S, A, B, rng);
}

// Random transitions with rewards squeezed into [lo, hi].
MarkovGame SqueezedGame(int H, int S, int A, int B, double lo, double hi,
                        std::uint64_t seed) {
  const MarkovGame base = RandomGame(H, S, A, B, seed);
  std::vector<double> rewards = base.rewards();
  for (double& r : rewards) r = lo + (hi - lo) * r;
  return MarkovGame(H, S, A, B, base.transitions(), rewards, 0);
}

// Tables at the start of each episode, (h, s) with h = 0..H.
struct ValueSnapshots {
  std::vector<std::vector<double>> upper, lower;
};

ValueSnapshots RunRecording(NashVLearner& learner, int episodes, Rng& rng) {
  ValueSnapshots out;
  const int H = learner.game().horizon(), S = learner.game().num_states();
  for (int k = 0; k < episodes; ++k) {
    out.upper.emplace_back();
    out.lower.emplace_back();
    for (int h = 0; h <= H; ++h) {
      for (int s = 0; s < S; ++s) {
        out.upper.back().push_back(learner.upper_v(h, s));
        out.lower.back().push_back(learner.lower_v(h, s));
      }
    }
    learner.RunEpisode(rng);
  }
  return out;
}

int NextState(const NashVHistory& history, int k, int h) {
  const Trajectory& path = history.trajectories[k - 1];
  return h + 1 < history.game.horizon() ? path.steps[h + 1].state
                                        : path.terminal_state;
}

TEST(NashVTest, InitialTables) {
  const MarkovGame game = RandomGame(3, 2, 2, 3, 1);
  const NashVLearner learner(game, Hyperparams::For(game, 10));
  for (int h = 0; h < 3; ++h) {
    for (int s = 0; s < 2; ++s) {
      for (double p : learner.policy(Side::kMax, h, s)) EXPECT_DOUBLE_EQ(p, 0.5);
      for (double p : learner.policy(Side::kMin, h, s)) EXPECT_DOUBLE_EQ(p, 1.0 / 3);
      EXPECT_EQ(learner.upper_v(h, s), 3.0 - h);
      EXPECT_EQ(learner.lower_v(h, s), 0.0);
      EXPECT_EQ(learner.count(h, s), 0);
    }
  }
  EXPECT_EQ(learner.upper_v(3, 1), 0.0);
}

TEST(NashVTest, FirstVisitAtLastStep) {
  const MarkovGame game = RandomGame(1, 1, 2, 2, 2);
  for (double c : {0.01, 2.0}) {
    const Hyperparams hp = Hyperparams::For(game, 5, c);
    NashVLearner learner(game, hp);
    Rng rng(3);
    learner.RunEpisode(rng);
    const Step step = learner.history().trajectories[0].steps[0];
    EXPECT_DOUBLE_EQ(learner.lower_v(0, 0),
                     std::max(0.0, step.reward - BetaV(1, Side::kMin, hp)));
    EXPECT_DOUBLE_EQ(learner.upper_v(0, 0),
                     std::min(1.0, step.reward + BetaV(1, Side::kMax, hp)));
  }
}

TEST(NashVTest, ValuesStayInRangeAndRowsStaySimplex) {
  const MarkovGame game = RandomGame(3, 3, 2, 3, 4);
  for (double c : {0.05, 1.0, 2.0, 4.0}) {
    NashVLearner learner(game, Hyperparams::For(game, 300, c));
    Rng rng(5);
    for (int k = 0; k < 300; ++k) {
      learner.RunEpisode(rng);
      for (int h = 0; h < 3; ++h) {
        for (int s = 0; s < 3; ++s) {
          ASSERT_GE(learner.lower_v(h, s), 0.0);
          ASSERT_LE(learner.upper_v(h, s), 3.0 - h);
          ASSERT_LE(learner.lower_v(h, s), 3.0);
          ASSERT_GE(learner.upper_v(h, s), 0.0);
          ASSERT_TRUE(IsSimplex(learner.policy(Side::kMax, h, s), 1e-12));
          ASSERT_TRUE(IsSimplex(learner.policy(Side::kMin, h, s), 1e-12));
        }
      }
    }
  }
}

TEST(NashVTest, ClipFreeRunMatchesWeightedSum) {
  const MarkovGame game = SqueezedGame(2, 2, 2, 2, 0.2, 0.8, 6);
  const int K = 300, H = 2, S = 2;
  const Hyperparams hp = Hyperparams::For(game, K, 1e-3);
  NashVLearner learner(game, hp);
  Rng rng(7);
  const ValueSnapshots snaps = RunRecording(learner, K, rng);
  const NashVHistory& history = learner.history();
  ASSERT_EQ(history.upper_clip_events, 0);
  ASSERT_EQ(history.lower_clip_events, 0);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      const int t = learner.count(h, s);
      if (t == 0) continue;
      const auto w = ComputeAlphaWeights(t, H);
      double upper = w.alpha0 * (H - h), lower = 0.0;
      for (int i = 1; i <= t; ++i) {
        const int k = history.VisitEpisode(h, s, i);
        const int next = NextState(history, k, h);
        const double r = history.trajectories[k - 1].steps[h].reward;
        upper += w.weights[i - 1] * (r + snaps.upper[k - 1][(h + 1) * S + next] +
                                     BetaV(i, Side::kMax, hp));
        lower += w.weights[i - 1] * (r + snaps.lower[k - 1][(h + 1) * S + next] -
                                     BetaV(i, Side::kMin, hp));
      }
      EXPECT_NEAR(learner.upper_v(h, s), upper, 1e-9) << h << "," << s;
      EXPECT_NEAR(learner.lower_v(h, s), lower, 1e-9) << h << "," << s;
    }
  }
}

// Rebuilds each side's loss accumulator from the trajectories and the logged
// policies, then compares the exponential-weights row.
TEST(NashVTest, PolicyRowsReproduceFromLoggedLosses) {
  const MarkovGame game = RandomGame(2, 2, 3, 2, 8);
  const int K = 400, H = 2, S = 2;
  const Hyperparams hp = Hyperparams::For(game, K);
  NashVLearner learner(game, hp);
  Rng rng(9);
  const ValueSnapshots snaps = RunRecording(learner, K, rng);
  const NashVHistory& history = learner.history();
  for (Side side : {Side::kMax, Side::kMin}) {
    const int n = game.num_actions(side);
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        const int t = learner.count(h, s);
        if (t == 0) continue;
        const auto w = ComputeAlphaWeights(t, H);
        std::vector<double> L(n, 0.0);
        for (int i = 1; i <= t; ++i) {
          const int k = history.VisitEpisode(h, s, i);
          const Step& step = history.trajectories[k - 1].steps[h];
          const int next = NextState(history, k, h);
          const int played = side == Side::kMax ? step.max_action : step.min_action;
          const double prob = history.Policy(side, h, s, k)[played];
          const double eta = EtaV(i, side, hp);
          const double numerator =
              side == Side::kMax
                  ? (H - h) - step.reward - snaps.upper[k - 1][(h + 1) * S + next]
                  : step.reward + snaps.lower[k - 1][(h + 1) * S + next];
          L[played] += w.weights[i - 1] * numerator / (prob + eta);
        }
        for (int a = 0; a < n; ++a) {
          EXPECT_NEAR(learner.loss(side, h, s, a), L[a], 1e-9);
        }
        const auto expected = ExponentialWeights(L, EtaV(t, side, hp) / Alpha(t, H));
        const auto row = learner.policy(side, h, s);
        for (int a = 0; a < n; ++a) EXPECT_NEAR(row[a], expected[a], 1e-9);
      }
    }
  }
}

TEST(NashVTest, HistoryReconstructsEveryEpisode) {
  const MarkovGame game = RandomGame(2, 2, 2, 2, 10);
  const Hyperparams hp = Hyperparams::For(game, 50);
  Rng rng(11);
  const NashVHistory history = RunNashV(game, hp, 50, rng);
  NashVLearner rerun(game, hp);
  Rng replay(11);
  for (int k = 1; k <= 50; ++k) {
    for (Side side : {Side::kMax, Side::kMin}) {
      for (int h = 0; h < 2; ++h) {
        for (int s = 0; s < 2; ++s) {
          const auto logged = history.Policy(side, h, s, k);
          const auto live = rerun.policy(side, h, s);
          for (int a = 0; a < 2; ++a) ASSERT_EQ(logged[a], live[a]);
          ASSERT_EQ(history.VisitCount(h, s, k), rerun.count(h, s));
        }
      }
    }
    ASSERT_EQ(history.upper_trace[k - 1], rerun.upper_v(0, 0));
    ASSERT_EQ(history.lower_trace[k - 1], rerun.lower_v(0, 0));
    rerun.RunEpisode(replay);
  }
}

TEST(NashVTest, ReplayIsBitwiseDeterministic) {
  const MarkovGame game = RandomGame(3, 2, 2, 2, 12);
  const Hyperparams hp = Hyperparams::For(game, 200, 0.5);
  Rng r1(13), r2(13);
  const NashVHistory a = RunNashV(game, hp, 200, r1);
  const NashVHistory b = RunNashV(game, hp, 200, r2);
  EXPECT_EQ(a.upper_trace, b.upper_trace);
  EXPECT_EQ(a.lower_trace, b.lower_trace);
  EXPECT_EQ(a.upper_clip_events, b.upper_clip_events);
}

// Game that maps to itself when the players swap seats: r(a, b) and
// 1 - r(b, a) agree and transitions ignore the seat order. The max side's
// shortfall H - h - V̄ then has the same law as the min side's V̲.
TEST(NashVTest, SymmetricGameMirrorsTheTwoSides) {
  const int H = 2, S = 2;
  Rng g(14);
  std::vector<double> rewards(H * S * 4), transitions(H * S * 4 * S);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      const std::size_t base = (h * S + s) * 4;
      const double off = g.Uniform();
      rewards[base + 0] = 0.5;
      rewards[base + 3] = 0.5;
      rewards[base + 1] = off;        // (a0, b1)
      rewards[base + 2] = 1.0 - off;  // (a1, b0)
      const double diag = g.Uniform(), cross = g.Uniform();
      for (int cell = 0; cell < 4; ++cell) {
        const double p = (cell == 0 || cell == 3) ? diag : cross;
        transitions[(base + cell) * S] = p;
        transitions[(base + cell) * S + 1] = 1.0 - p;
      }
    }
  }
  const MarkovGame game(H, S, 2, 2, transitions, rewards, 0);
  const int K = 120, seeds = 400;
  const Hyperparams hp = Hyperparams::For(game, K, 0.05);
  std::vector<double> diff_mean(K, 0.0), diff_sq(K, 0.0);
  for (int i = 0; i < seeds; ++i) {
    Rng rng(DeriveSeed(15, i));
    const NashVHistory history = RunNashV(game, hp, K, rng);
    for (int k = 0; k < K; ++k) {
      const double d = (H - history.upper_trace[k]) - history.lower_trace[k];
      diff_mean[k] += d / seeds;
      diff_sq[k] += d * d / seeds;
    }
  }
  for (int k : {0, 1, 10, 40, K - 1}) {
    const double se =
        std::sqrt(std::max(0.0, diff_sq[k] - diff_mean[k] * diff_mean[k]) / seeds);
    EXPECT_LE(std::abs(diff_mean[k]), 5 * se + 1e-12) << "k=" << k + 1;
  }
}

}  // namespace
}  // namespace nashplay
