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
#ifndef NASHPLAY_MATRIX_GAME_H_
#define NASHPLAY_MATRIX_GAME_H_

#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace nashplay {

// Dense row-major payoff matrix; rows are max-player actions.
class Matrix {
 public:
  Matrix(int rows, int cols);
  Matrix(int rows, int cols, std::vector<double> entries);
  static Matrix FromRows(std::initializer_list<std::initializer_list<double>>);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double operator()(int r, int c) const { return entries_[r * cols_ + c]; }
  double& operator()(int r, int c) { return entries_[r * cols_ + c]; }
  const std::vector<double>& entries() const { return entries_; }

  Matrix Transposed() const;
  Matrix Negated() const;

 private:
  int rows_, cols_;
  std::vector<double> entries_;
};

// Distribution over one player's actions.
using MixedStrategy = std::vector<double>;

// Distribution over action pairs, row-major (a, b).
class JointDistribution {
 public:
  JointDistribution(int rows, int cols, std::vector<double> probs);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double operator()(int a, int b) const { return probs_[a * cols_ + b]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  int rows_, cols_;
  std::vector<double> probs_;
};

struct ZeroSumSolution {
  MixedStrategy max_strategy;  // maximin
  MixedStrategy min_strategy;  // minimax
  double value;
};

inline constexpr double kFeasibilityTolerance = 1e-8;

// Nash equilibrium of the zero-sum game where the row player maximizes.
// Throws std::logic_error if the LP reports infeasibility, which cannot
// happen for a finite matrix.
ZeroSumSolution SolveZeroSum(const Matrix& payoff);

// max_a (Q nu)_a - min_b (mu^T Q)_b; zero exactly at a Nash pair.
double ZeroSumExploitability(const Matrix& payoff, std::span<const double> mu,
                             std::span<const double> nu);

// Coarse correlated equilibrium of the pair (upper, lower): no fixed
// deviation of the max player improves E[upper], none of the min player
// lowers E[lower]. Among feasible points the returned one maximizes the
// smallest constraint slack.
JointDistribution ComputeCce(const Matrix& upper, const Matrix& lower);

// Largest violation over all pure deviations (<= 0 means feasible).
double CceViolation(const Matrix& upper, const Matrix& lower,
                    const JointDistribution& pi);

// Row and column sums of pi.
std::pair<MixedStrategy, MixedStrategy> CceMarginals(
    const JointDistribution& pi);

// E_{(a,b)~pi} payoff(a, b).
double Expectation(const Matrix& payoff, const JointDistribution& pi);

}  // namespace nashplay

#endif  // NASHPLAY_MATRIX_GAME_H_
