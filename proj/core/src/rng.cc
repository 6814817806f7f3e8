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

#include "nashplay/rng.h"

#include <cmath>
#include <stdexcept>

namespace nashplay {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

void MulHiLo(std::uint32_t a, std::uint32_t b, std::uint32_t* hi,
             std::uint32_t* lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  *hi = static_cast<std::uint32_t>(product >> 32);
  *lo = static_cast<std::uint32_t>(product);
}

std::array<std::uint32_t, 4> Philox(std::array<std::uint32_t, 4> ctr,
                                    std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    MulHiLo(kPhiloxM0, ctr[0], &hi0, &lo0);
    MulHiLo(kPhiloxM1, ctr[2], &hi1, &lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : key_(SplitMix64(seed)), stream_(stream) {}

Rng Rng::Split(std::uint64_t stream_id) const {
  Rng child(0);
  child.key_ = SplitMix64(key_ ^ SplitMix64(stream_ + 0x632BE59BD9B4E019ull));
  child.stream_ = stream_id;
  return child;
}

void Rng::Refill() {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(counter_),
      static_cast<std::uint32_t>(counter_ >> 32),
      static_cast<std::uint32_t>(stream_),
      static_cast<std::uint32_t>(stream_ >> 32)};
  block_ = Philox(ctr, {static_cast<std::uint32_t>(key_),
                        static_cast<std::uint32_t>(key_ >> 32)});
  ++counter_;
  available_ = 4;
}

std::uint64_t Rng::NextU64() {
  if (available_ < 2) Refill();
  const std::uint64_t lo = block_[4 - available_];
  const std::uint64_t hi = block_[5 - available_];
  available_ -= 2;
  return (hi << 32) | lo;
}

double Rng::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

int Rng::UniformInt(int n) {
  if (n <= 0) throw std::invalid_argument("UniformInt: n must be positive");
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return static_cast<int>(x % range);
}

bool Rng::Bernoulli(double p) { return Uniform() < p; }

int Rng::Categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) {
    throw std::invalid_argument("Categorical: weights must have positive sum");
  }
  const double u = Uniform() * total;
  double cumulative = 0.0;
  int last_positive = -1;
  for (int i = 0; i < static_cast<int>(weights.size()); ++i) {
    if (weights[i] <= 0.0) continue;
    cumulative += weights[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  return last_positive;
}

double Rng::Exponential() { return -std::log1p(-Uniform()); }

std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t index) {
  return SplitMix64(SplitMix64(base) + 0x9E3779B97F4A7C15ull * (index + 1));
}

}  // namespace nashplay
