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

#include <algorithm>
#include <stdexcept>

#include "nashplay/bandit_ftrl.h"

namespace nashplay {

NashVLearner::NashVLearner(const MarkovGame& game, const Hyperparams& hp)
    : history_{game, hp} {
  hp.Validate();
  if (hp.horizon != game.horizon() || hp.num_states != game.num_states() ||
      hp.num_max_actions != game.num_max_actions() ||
      hp.num_min_actions != game.num_min_actions()) {
    throw std::invalid_argument("NashVLearner: hyperparams do not match game");
  }
  const int H = game.horizon();
  const int S = game.num_states();
  const int A = game.num_max_actions();
  const int B = game.num_min_actions();
  upper_v_.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  lower_v_.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  // The upper value starts at its ceiling H - h (steps are zero-based).
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) upper_v_[h * S + s] = H - h;
  }
  count_.assign(static_cast<std::size_t>(H) * S, 0);
  max_loss_.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  min_loss_.assign(static_cast<std::size_t>(H) * S * B, 0.0);
  max_policy_.assign(max_loss_.size(), 1.0 / A);
  min_policy_.assign(min_loss_.size(), 1.0 / B);
  history_.visits = VisitLog(static_cast<std::size_t>(H) * S);
  history_.max_policy = PolicyLog(H, S, std::vector<double>(A, 1.0 / A));
  history_.min_policy = PolicyLog(H, S, std::vector<double>(B, 1.0 / B));
}

double NashVLearner::loss(Side side, int h, int s, int action) const {
  const int n = game().num_actions(side);
  const auto& table = side == Side::kMax ? max_loss_ : min_loss_;
  return table[(static_cast<std::size_t>(h) * S() + s) * n + action];
}

std::span<const double> NashVLearner::policy(Side side, int h, int s) const {
  const int n = game().num_actions(side);
  const auto& table = side == Side::kMax ? max_policy_ : min_policy_;
  return {table.data() + (static_cast<std::size_t>(h) * S() + s) * n,
          static_cast<std::size_t>(n)};
}

void NashVLearner::RunEpisode(Rng& rng) {
  const MarkovGame& g = game();
  const int k = history_.episodes + 1;
  const int s1 = g.initial_state();
  history_.upper_trace.push_back(upper_v(0, s1));
  history_.lower_trace.push_back(lower_v(0, s1));

  Trajectory trajectory;
  trajectory.steps.reserve(g.horizon());
  int s = s1;
  for (int h = 0; h < g.horizon(); ++h) {
    const int a = rng.Categorical(policy(Side::kMax, h, s));
    const int b = rng.Categorical(policy(Side::kMin, h, s));
    const double r = g.reward(h, s, a, b);
    const int next = rng.Categorical(g.next_state_distribution(h, s, a, b));
    trajectory.steps.push_back({s, a, b, r});
    Update(h, s, a, b, r, next);
    history_.visits.Record(history_.StateKey(h, s), k);
    s = next;
  }
  trajectory.terminal_state = s;
  history_.trajectories.push_back(std::move(trajectory));
  history_.episodes = k;
}

void NashVLearner::Update(int h, int s, int a, int b, double r,
                          int next_state) {
  const MarkovGame& g = game();
  const Hyperparams& hp = history_.hp;
  const int H = g.horizon();
  const std::size_t key = static_cast<std::size_t>(h) * S() + s;
  const int t = ++count_[key];
  const double alpha = Alpha(t, H);
  const double ceiling = H - h;
  const int k = history_.episodes + 1;

  // Max side: values capped at the remaining horizon, losses measured as
  // shortfall from it.
  {
    const int A = g.num_max_actions();
    const double next_v = upper_v(h + 1, next_state);
    const double raw = (1.0 - alpha) * upper_v_[key] +
                       alpha * (r + next_v + BetaV(t, Side::kMax, hp));
    if (raw > ceiling) ++history_.upper_clip_events;
    upper_v_[key] = std::min(ceiling, raw);

    const double eta = EtaV(t, Side::kMax, hp);
    double* L = max_loss_.data() + key * A;
    double* mu = max_policy_.data() + key * A;
    const double estimate = (ceiling - r - next_v) / (mu[a] + eta);
    for (int i = 0; i < A; ++i) {
      L[i] = (1.0 - alpha) * L[i] + alpha * (i == a ? estimate : 0.0);
    }
    const auto row = ExponentialWeights({L, static_cast<std::size_t>(A)},
                                        eta / alpha);
    std::copy(row.begin(), row.end(), mu);
    history_.max_policy.Record(h, s, k, row);
  }
  {
    const int B = g.num_min_actions();
    const double next_v = lower_v(h + 1, next_state);
    const double raw = (1.0 - alpha) * lower_v_[key] +
                       alpha * (r + next_v - BetaV(t, Side::kMin, hp));
    if (raw < 0.0) ++history_.lower_clip_events;
    lower_v_[key] = std::max(0.0, raw);

    const double eta = EtaV(t, Side::kMin, hp);
    double* L = min_loss_.data() + key * B;
    double* nu = min_policy_.data() + key * B;
    const double estimate = (r + next_v) / (nu[b] + eta);
    for (int j = 0; j < B; ++j) {
      L[j] = (1.0 - alpha) * L[j] + alpha * (j == b ? estimate : 0.0);
    }
    const auto row = ExponentialWeights({L, static_cast<std::size_t>(B)},
                                        eta / alpha);
    std::copy(row.begin(), row.end(), nu);
    history_.min_policy.Record(h, s, k, row);
  }
}

NashVHistory RunNashV(const MarkovGame& game, const Hyperparams& hp,
                      int episodes, Rng& rng) {
  if (episodes < 1) throw std::invalid_argument("RunNashV: K must be >= 1");
  NashVLearner learner(game, hp);
  for (int k = 0; k < episodes; ++k) learner.RunEpisode(rng);
  return std::move(learner).TakeHistory();
}

}  // namespace nashplay
