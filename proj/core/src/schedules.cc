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
#include "nashplay/schedules.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nashplay {
namespace {

void RequireStep(int t, const char* fn) {
  if (t < 1) throw std::invalid_argument(std::string(fn) + ": t must be >= 1");
}

}  // namespace

Hyperparams Hyperparams::For(const MarkovGame& game, int episodes, double c,
                             double p, std::optional<double> total_steps) {
  Hyperparams hp;
  hp.horizon = game.horizon();
  hp.num_states = game.num_states();
  hp.num_max_actions = game.num_max_actions();
  hp.num_min_actions = game.num_min_actions();
  hp.episodes = episodes;
  hp.c = c;
  hp.p = p;
  const double steps = total_steps.value_or(static_cast<double>(episodes) *
                                            game.horizon());
  hp.iota = Iota(hp.num_states, hp.num_max_actions, hp.num_min_actions, steps,
                 p);
  hp.Validate();
  return hp;
}

void Hyperparams::Validate() const {
  if (horizon < 1 || num_states < 1 || num_max_actions < 1 ||
      num_min_actions < 1) {
    throw std::invalid_argument("Hyperparams: dimensions must be positive");
  }
  if (episodes < 1) throw std::invalid_argument("Hyperparams: K must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("Hyperparams: c must be positive");
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("Hyperparams: p must be in (0, 1]");
  }
  if (!(iota > 0.0)) {
    throw std::invalid_argument("Hyperparams: iota must be positive");
  }
}

double Iota(int num_states, int num_max_actions, int num_min_actions,
            double total_steps, double p) {
  return std::log(static_cast<double>(num_states) * num_max_actions *
                  num_min_actions * total_steps / p);
}

double Alpha(int t, int horizon) {
  RequireStep(t, "Alpha");
  return static_cast<double>(horizon + 1) / static_cast<double>(horizon + t);
}

AlphaWeights ComputeAlphaWeights(int t, int horizon) {
  RequireStep(t, "ComputeAlphaWeights");
  AlphaWeights result{0.0, std::vector<double>(t)};
  double tail = 1.0;  // prod_{j=i+1}^{t} (1 - alpha_j)
  for (int i = t; i >= 1; --i) {
    result.weights[i - 1] = Alpha(i, horizon) * tail;
    tail *= 1.0 - Alpha(i, horizon);
  }
  result.alpha0 = tail;
  return result;
}

int SampleAlphaIndex(int t, int horizon, Rng& rng) {
  RequireStep(t, "SampleAlphaIndex");
  const double u = rng.Uniform();
  // Mass concentrates on recent indices, so walk down from t.
  double tail = 1.0;
  double cumulative = 0.0;
  for (int i = t; i >= 1; --i) {
    const double alpha = Alpha(i, horizon);
    cumulative += alpha * tail;
    if (u < cumulative) return i;
    tail *= 1.0 - alpha;
  }
  return 1;
}

double BetaQ(int t, const Hyperparams& hp) {
  RequireStep(t, "BetaQ");
  const double h = hp.horizon;
  return hp.c * std::sqrt(h * h * h * hp.iota / t);
}

double BetaV(int t, Side side, const Hyperparams& hp) {
  RequireStep(t, "BetaV");
  const double n =
      side == Side::kMax ? hp.num_max_actions : hp.num_min_actions;
  const double h = hp.horizon;
  return hp.c * std::sqrt(n * h * h * h * h * hp.iota / t);
}

double EtaV(int t, Side side, const Hyperparams& hp) {
  RequireStep(t, "EtaV");
  const double n =
      side == Side::kMax ? hp.num_max_actions : hp.num_min_actions;
  return std::sqrt(std::log(n) / (n * t));
}

}  // namespace nashplay
