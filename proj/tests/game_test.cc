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


#include "nashplay/game.h"

#include <cmath>
#include <filesystem>
#include <set>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "nashplay/game_io.h"
#include "nashplay/rng.h"

namespace nashplay {
namespace {

MarkovGame OneStateGame(double reward) {
  return MarkovGame(1, 1, 1, 1, {1.0}, {reward}, 0);
}

TEST(RngTest, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.NextU64(), b.NextU64());
  Rng c(42, 1);
  EXPECT_NE(Rng(42).NextU64(), c.NextU64());
}

TEST(RngTest, SplitDoesNotAdvanceParent) {
  Rng parent(7);
  Rng copy(7);
  Rng child = parent.Split(3);
  EXPECT_EQ(parent.NextU64(), copy.NextU64());
  EXPECT_NE(child.NextU64(), Rng(7).NextU64());
}

TEST(RngTest, UniformIntAndCategoricalFrequencies) {
  Rng rng(11);
  std::vector<int> counts(3, 0);
  const std::vector<double> weights = {1.0, 2.0, 1.0};
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++counts[rng.Categorical(weights)];
  EXPECT_NEAR(counts[1] / static_cast<double>(n), 0.5, 0.005);
  EXPECT_NEAR(counts[0] / static_cast<double>(n), 0.25, 0.005);
  for (int i = 0; i < 10000; ++i) {
    const int v = rng.UniformInt(7);
    ASSERT_GE(v, 0);
    ASSERT_LT(v, 7);
  }
  const double u = rng.Uniform();
  EXPECT_GE(u, 0.0);
  EXPECT_LT(u, 1.0);
}

TEST(RngTest, DerivedSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(DeriveSeed(1, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(DeriveSeed(5, 9), DeriveSeed(5, 9));
}

TEST(ValidateGameTest, WellFormedSingleStateIsOk) {
  EXPECT_TRUE(ValidateGame(OneStateGame(0.5)).empty());
}

TEST(ValidateGameTest, ReportsDeficientRow) {
  MarkovGame game(1, 2, 1, 2, {0.9, 0.0, 0.5, 0.5, 1.0, 0.0, 0.0, 1.0},
                  {0.1, 0.2, 0.3, 0.4}, 0);
  const auto issues = ValidateGame(game);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].h, 0);
  EXPECT_EQ(issues[0].s, 0);
  EXPECT_EQ(issues[0].a, 0);
  EXPECT_EQ(issues[0].b, 0);
}

TEST(ValidateGameTest, ReportsRewardOutOfRange) {
  const auto issues = ValidateGame(OneStateGame(1.5));
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_NE(issues[0].message.find("reward out of [0,1]"), std::string::npos);
}

TEST(MarkovPolicyTest, ConstructorsProduceSimplexRows) {
  Rng rng(3);
  const MarkovGame game = MakeRandomGame(2, 3, 2, 3, rng);
  const auto mu = MarkovPolicy::Uniform(Side::kMax, game);
  const auto nu = MarkovPolicy::Deterministic(Side::kMin, game,
                                              std::vector<int>(6, 2));
  for (int h = 0; h < 2; ++h) {
    for (int s = 0; s < 3; ++s) {
      EXPECT_TRUE(IsSimplex(mu.row(h, s), 1e-12));
      EXPECT_TRUE(IsSimplex(nu.row(h, s), 1e-12));
      EXPECT_EQ(nu.row(h, s)[2], 1.0);
    }
  }
  EXPECT_THROW(MarkovPolicy(Side::kMax, 1, 1, 2, {0.7, 0.7}),
               std::invalid_argument);
}

TEST(SampleEpisodeTest, DeterministicGameGivesUniquePath) {
  // Two states; action pair (1, 0) moves to state 1, everything else stays.
  const int H = 3, S = 2;
  std::vector<double> transitions, rewards;
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const int next = (a == 1 && b == 0) ? 1 : s;
          transitions.push_back(next == 0 ? 1.0 : 0.0);
          transitions.push_back(next == 1 ? 1.0 : 0.0);
          rewards.push_back(0.1 * (h + 1) + 0.01 * s + 0.001 * (2 * a + b));
        }
      }
    }
  }
  const MarkovGame game(H, S, 2, 2, transitions, rewards, 0);
  const auto mu = MarkovPolicy::Deterministic(Side::kMax, game, {1, 0, 0, 0, 0, 0});
  const auto nu = MarkovPolicy::Deterministic(Side::kMin, game, {0, 0, 1, 1, 1, 1});
  Rng rng(1);
  const Trajectory path = SampleEpisode(game, mu, nu, rng);
  ASSERT_EQ(path.steps.size(), 3u);
  EXPECT_EQ(path.steps[0].state, 0);
  EXPECT_EQ(path.steps[1].state, 1);
  EXPECT_EQ(path.steps[2].state, 1);
  EXPECT_EQ(path.terminal_state, 1);
  EXPECT_DOUBLE_EQ(path.steps[0].reward, game.reward(0, 0, 1, 0));
  EXPECT_DOUBLE_EQ(path.steps[1].reward, game.reward(1, 1, 0, 1));
  EXPECT_DOUBLE_EQ(path.Return(), game.reward(0, 0, 1, 0) +
                                      game.reward(1, 1, 0, 1) +
                                      game.reward(2, 1, 0, 1));
}

TEST(SampleEpisodeTest, FixedSeedIsReproducible) {
  Rng g(5);
  const MarkovGame game = MakeRandomGame(4, 3, 2, 2, g);
  const auto joint = MarkovJointPolicy::Uniform(game);
  for (int trial = 0; trial < 20; ++trial) {
    Rng r1(trial), r2(trial);
    const Trajectory t1 = SampleEpisode(game, joint, r1);
    const Trajectory t2 = SampleEpisode(game, joint, r2);
    ASSERT_EQ(t1.steps.size(), 4u);
    for (int h = 0; h < 4; ++h) {
      EXPECT_EQ(t1.steps[h].state, t2.steps[h].state);
      EXPECT_EQ(t1.steps[h].max_action, t2.steps[h].max_action);
      EXPECT_EQ(t1.steps[h].min_action, t2.steps[h].min_action);
      EXPECT_EQ(t1.steps[h].reward, t2.steps[h].reward);
      EXPECT_EQ(t1.steps[h].reward,
                game.reward(h, t1.steps[h].state, t1.steps[h].max_action,
                            t1.steps[h].min_action));
    }
  }
}

TEST(SampleEpisodeTest, UniformPlayOnParityVisitsOnlyStepStates) {
  const MarkovGame game = MakeParityGame(2);
  const auto mu = MarkovPolicy::Uniform(Side::kMax, game);
  const auto nu = MarkovPolicy::Uniform(Side::kMin, game);
  Rng rng(2);
  for (int e = 0; e < 2000; ++e) {
    const Trajectory path = SampleEpisode(game, mu, nu, rng);
    EXPECT_EQ(path.steps[0].state, ParityStateIndex(1, 0));
    for (int h = 1; h < 3; ++h) {
      const int s = path.steps[h].state;
      EXPECT_TRUE(s == ParityStateIndex(h + 1, 0) ||
                  s == ParityStateIndex(h + 1, 1));
    }
    EXPECT_EQ(path.terminal_state, ParityTerminalState(2));
  }
}

TEST(RandomGameTest, SingleCell) {
  Rng rng(0);
  const MarkovGame game = MakeRandomGame(1, 1, 1, 1, rng);
  EXPECT_EQ(game.num_cells(), 1u);
  EXPECT_TRUE(ValidateGame(game).empty());
}

TEST(RandomGameTest, FixedSeedIsBitwiseIdentical) {
  Rng r1(99), r2(99);
  const MarkovGame g1 = MakeRandomGame(3, 3, 2, 2, r1);
  const MarkovGame g2 = MakeRandomGame(3, 3, 2, 2, r2);
  EXPECT_EQ(g1.transitions(), g2.transitions());
  EXPECT_EQ(g1.rewards(), g2.rewards());
  EXPECT_TRUE(g1 == g2);
}

TEST(RandomGameTest, AllRowsStochastic) {
  Rng rng(4);
  const MarkovGame game = MakeRandomGame(3, 3, 2, 2, rng);
  EXPECT_TRUE(ValidateGame(game).empty());
  int rows = 0;
  for (int h = 0; h < 3; ++h) {
    for (int s = 0; s < 3; ++s) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          EXPECT_TRUE(IsSimplex(game.next_state_distribution(h, s, a, b), 1e-12));
          const double r = game.reward(h, s, a, b);
          EXPECT_GE(r, 0.0);
          EXPECT_LE(r, 1.0);
          ++rows;
        }
      }
    }
  }
  EXPECT_EQ(rows, 36);
}

TEST(ParityGameTest, TableEntriesForOneBit) {
  const MarkovGame game = MakeParityGame(1);
  EXPECT_EQ(game.horizon(), 2);
  EXPECT_EQ(game.num_states(), 4);
  const int s1 = ParityStateIndex(1, 0);
  EXPECT_EQ(game.next_state_distribution(0, s1, 1, 1)[ParityStateIndex(2, 1)],
            1.0);
  EXPECT_EQ(game.reward(1, ParityStateIndex(2, 1), 0, 1), 1.0);
  EXPECT_EQ(game.reward(1, ParityStateIndex(2, 1), 1, 0), 0.0);
  EXPECT_EQ(game.reward(1, ParityStateIndex(2, 0), 1, 0), 1.0);
}

TEST(ParityGameTest, RewardVanishesBeforeLastStep) {
  for (int n = 1; n <= 5; ++n) {
    const MarkovGame game = MakeParityGame(n);
    for (int h = 0; h + 1 < game.horizon(); ++h) {
      for (int s = 0; s < game.num_states(); ++s) {
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) EXPECT_EQ(game.reward(h, s, a, b), 0.0);
        }
      }
    }
  }
}

// Next state bit read straight off the transition table.
int NextBit(int bit, int a, int b) {
  if (bit == 0) return (a == 1 && b == 1) ? 1 : 0;
  return (a == 0 && b == 1) ? 0 : 1;
}

TEST(ParityGameTest, SimulationMatchesBitRecurrence) {
  for (int n = 1; n <= 6; ++n) {
    const MarkovGame game = MakeParityGame(n);
    const int H = n + 1;
    const int S = game.num_states();
    for (int code = 0; code < (1 << (2 * n)); ++code) {
      std::vector<int> max_actions(H * S, 0), min_actions(H * S, 0);
      for (int i = 0; i < n; ++i) {
        for (int s = 0; s < S; ++s) {
          max_actions[i * S + s] = code >> (2 * i) & 1;
          min_actions[i * S + s] = code >> (2 * i + 1) & 1;
        }
      }
      const auto mu = MarkovPolicy::Deterministic(Side::kMax, game, max_actions);
      const auto nu = MarkovPolicy::Deterministic(Side::kMin, game, min_actions);
      Rng rng(code);
      const Trajectory path = SampleEpisode(game, mu, nu, rng);
      int bit = 0;
      for (int i = 1; i <= n; ++i) {
        bit = NextBit(bit, code >> (2 * (i - 1)) & 1, code >> (2 * i - 1) & 1);
        ASSERT_EQ(path.steps[i].state, ParityStateIndex(i + 1, bit))
            << "n=" << n << " code=" << code << " step=" << i + 1;
      }
    }
  }
}

TEST(ParityOpponentTest, NoiselessLastActionIsLabel) {
  ParityOpponent opponent(1, {1}, 0.0);
  Rng rng(0);
  opponent.SetDraw({1}, opponent.Parity({1}));
  EXPECT_EQ(opponent.label(), 1);
  EXPECT_EQ(opponent.Act(0, ParityStateIndex(1, 0), rng), 1);
  EXPECT_EQ(opponent.Act(1, ParityStateIndex(2, 0), rng), 1);
}

TEST(ParityOpponentTest, LabelNoiseRate) {
  ParityOpponent opponent(4, {1, 3}, 0.2);
  Rng rng(8);
  int flipped = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    opponent.Reset(rng);
    if (opponent.label() != opponent.Parity(opponent.x())) ++flipped;
  }
  EXPECT_NEAR(flipped / static_cast<double>(n), 0.2, 0.005);
}

TEST(ParityOpponentTest, TrackingPolicyEarnsOneMinusNoise) {
  const int n = 3;
  const std::vector<int> subset = {1, 3};
  const MarkovGame game = MakeParityGame(n);
  const MarkovPolicy mu = MakeParityTrackingPolicy(n, subset);
  for (double noise : {0.0, 0.2}) {
    MarkovPolicyActor actor(mu);
    ParityOpponent opponent(n, subset, noise);
    Rng rng(17);
    double total = 0.0;
    const int episodes = 100000;
    for (int e = 0; e < episodes; ++e) {
      total += SampleEpisode(game, actor, opponent, rng).Return();
    }
    EXPECT_NEAR(total / episodes, 1.0 - noise, 0.01) << "noise=" << noise;
  }
}

TEST(GameIoTest, JsonRoundTripIsExact) {
  Rng rng(21);
  const MarkovGame game = MakeRandomGame(2, 3, 2, 3, rng);
  const nlohmann::json doc = GameToJson(game);
  EXPECT_EQ(doc["h"], 2);
  EXPECT_EQ(doc["s"], 3);
  EXPECT_EQ(doc["a"], 2);
  EXPECT_EQ(doc["b"], 3);
  EXPECT_TRUE(GameFromJson(nlohmann::json::parse(doc.dump())) == game);

  const auto path =
      std::filesystem::temp_directory_path() / "nashplay_game_io_test.json";
  WriteGameFile(game, path.string());
  EXPECT_TRUE(ReadGameFile(path.string()) == game);
  std::filesystem::remove(path);
}

TEST(GameIoTest, RejectsMalformedDocuments) {
  nlohmann::json doc = GameToJson(OneStateGame(0.25));
  doc["rewards"] = {0.25, 0.5};
  EXPECT_ANY_THROW(GameFromJson(doc));
  nlohmann::json missing = GameToJson(OneStateGame(0.25));
  missing.erase("transitions");
  EXPECT_ANY_THROW(GameFromJson(missing));
  EXPECT_ANY_THROW(ReadGameFile("/nonexistent/nashplay/game.json"));
}

}  // namespace
}  // namespace nashplay
