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

#ifndef NASHPLAY_RNG_H_
#define NASHPLAY_RNG_H_

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace nashplay {

// Counter-based Philox4x32-10 generator. Output depends only on (key,
// counter), so streams are reproducible across platforms and compilers.
// Distribution helpers are implemented here rather than through <random>
// because the standard distributions are implementation-defined.
class Rng {
 public:
  static constexpr std::string_view kName = "philox4x32-10";
  static constexpr int kVersion = 1;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  // Independent child generator; the parent is not advanced.
  Rng Split(std::uint64_t stream_id) const;

  std::uint64_t NextU64();
  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();
  // Uniform on {0, ..., n - 1}; unbiased.
  int UniformInt(int n);
  bool Bernoulli(double p);
  // Index drawn from a (not necessarily normalized) nonnegative weight vector.
  int Categorical(std::span<const double> weights);
  // Standard exponential variate.
  double Exponential();

  std::uint64_t key() const { return key_; }

 private:
  void Refill();

  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int available_ = 0;
};

// Deterministic seed expansion: the i-th derived seed of a base seed.
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t index);

}  // namespace nashplay

#endif  // NASHPLAY_RNG_H_
