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
#include "nashplay/nash_q.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nashplay/matrix_game.h"

namespace nashplay {
namespace {

std::vector<double> UniformRow(int n) { return std::vector<double>(n, 1.0 / n); }

}  // namespace

NashQLearner::NashQLearner(const MarkovGame& game, const Hyperparams& hp)
    : history_{game, hp},
      policy_(MarkovJointPolicy::Uniform(game)) {
  hp.Validate();
  if (hp.horizon != game.horizon() || hp.num_states != game.num_states() ||
      hp.num_max_actions != game.num_max_actions() ||
      hp.num_min_actions != game.num_min_actions()) {
    throw std::invalid_argument("NashQLearner: hyperparams do not match game");
  }
  const int H = game.horizon();
  const int S = game.num_states();
  const int A = game.num_max_actions();
  const int B = game.num_min_actions();
  // Each step adds at most 1 + 2c sqrt(H^3 iota) on top of the next step's
  // bound, and untouched entries sit at H.
  sanity_cap_ = 2.0 * H * (1.0 + hp.c * std::sqrt(H * H * H * hp.iota));
  upper_q_.assign(game.num_cells(), static_cast<double>(H));
  lower_q_.assign(game.num_cells(), 0.0);
  count_.assign(game.num_cells(), 0);
  // D_pi of the initial tables; the terminal layer stays at zero.
  upper_v_.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  lower_v_.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  for (int i = 0; i < H * S; ++i) upper_v_[i] = H;
  history_.visits = VisitLog(game.num_cells());
  history_.joint_policy = PolicyLog(H, S, UniformRow(A * B));
  history_.max_marginal = PolicyLog(H, S, UniformRow(A));
  history_.min_marginal = PolicyLog(H, S, UniformRow(B));
}

void NashQLearner::RunEpisode(Rng& rng) {
  const MarkovGame& g = game();
  const int k = history_.episodes + 1;
  const int s1 = g.initial_state();
  history_.upper_trace.push_back(upper_v(0, s1));
  history_.lower_trace.push_back(lower_v(0, s1));

  Trajectory trajectory;
  trajectory.steps.reserve(g.horizon());
  int s = s1;
  const int B = g.num_min_actions();
  for (int h = 0; h < g.horizon(); ++h) {
    const int pair = rng.Categorical(policy_.row(h, s));
    const int a = pair / B;
    const int b = pair % B;
    const double r = g.reward(h, s, a, b);
    const int next = rng.Categorical(g.next_state_distribution(h, s, a, b));
    trajectory.steps.push_back({s, a, b, r});
    Update(h, s, a, b, r, next);
    history_.visits.Record(g.CellIndex(h, s, a, b), k);
    s = next;
  }
  trajectory.terminal_state = s;
  history_.trajectories.push_back(std::move(trajectory));
  history_.episodes = k;
}

void NashQLearner::Update(int h, int s, int a, int b, double r,
                          int next_state) {
  const MarkovGame& g = game();
  const Hyperparams& hp = history_.hp;
  const std::size_t cell = g.CellIndex(h, s, a, b);
  const int t = ++count_[cell];
  const double alpha = Alpha(t, g.horizon());
  const double beta = BetaQ(t, hp);
  upper_q_[cell] = (1.0 - alpha) * upper_q_[cell] +
                   alpha * (r + upper_v(h + 1, next_state) + beta);
  lower_q_[cell] = (1.0 - alpha) * lower_q_[cell] +
                   alpha * (r + lower_v(h + 1, next_state) - beta);
  const double scale = std::max(1.0, std::abs(upper_q_[cell]));
  if (!(upper_q_[cell] >= lower_q_[cell] - 1e-9 * scale) ||
      !(upper_q_[cell] <= sanity_cap_)) {
    throw std::logic_error("NashQLearner: Q bounds violated (" +
                           std::to_string(upper_q_[cell]) + " vs " +
                           std::to_string(lower_q_[cell]) + ", cap " +
                           std::to_string(sanity_cap_) + ") at h=" +
                           std::to_string(h) + " s=" + std::to_string(s));
  }

  const int A = g.num_max_actions();
  const int B = g.num_min_actions();
  Matrix upper(A, B), lower(A, B);
  for (int i = 0; i < A; ++i) {
    for (int j = 0; j < B; ++j) {
      upper(i, j) = upper_q_[g.CellIndex(h, s, i, j)];
      lower(i, j) = lower_q_[g.CellIndex(h, s, i, j)];
    }
  }
  const JointDistribution pi = ComputeCce(upper, lower);
  auto row = policy_.mutable_row(h, s);
  std::copy(pi.probs().begin(), pi.probs().end(), row.begin());
  upper_v_[h * S() + s] = Expectation(upper, pi);
  lower_v_[h * S() + s] = Expectation(lower, pi);

  const int k = history_.episodes + 1;
  auto [mu, nu] = CceMarginals(pi);
  history_.joint_policy.Record(h, s, k, pi.probs());
  history_.max_marginal.Record(h, s, k, std::move(mu));
  history_.min_marginal.Record(h, s, k, std::move(nu));
}

NashQHistory RunNashQ(const MarkovGame& game, const Hyperparams& hp,
                      int episodes, Rng& rng) {
  if (episodes < 1) throw std::invalid_argument("RunNashQ: K must be >= 1");
  NashQLearner learner(game, hp);
  for (int k = 0; k < episodes; ++k) learner.RunEpisode(rng);
  return std::move(learner).TakeHistory();
}

}  // namespace nashplay
