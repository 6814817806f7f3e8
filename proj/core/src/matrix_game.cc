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
#include "nashplay/matrix_game.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nashplay/lp.h"

namespace nashplay {
namespace {

// Clears round-off negatives and renormalizes.
std::vector<double> CleanDistribution(std::vector<double> p) {
  double total = 0.0;
  for (double& v : p) {
    v = std::max(v, 0.0);
    total += v;
  }
  if (!(total > 0.0)) throw std::logic_error("LP returned empty distribution");
  for (double& v : p) v /= total;
  return p;
}

// maximin strategy of the row player and its guaranteed value.
std::pair<MixedStrategy, double> SolveRowPlayer(const Matrix& payoff) {
  const int rows = payoff.rows();
  const int cols = payoff.cols();
  double min_entry = std::numeric_limits<double>::infinity();
  for (double v : payoff.entries()) min_entry = std::min(min_entry, v);

  // Variables: x_0..x_{rows-1}, then v' = v - min_entry >= 0.
  LinearProgram lp(rows + 1);
  lp.objective[rows] = 1.0;
  for (int b = 0; b < cols; ++b) {
    std::vector<double> coeffs(rows + 1);
    for (int a = 0; a < rows; ++a) coeffs[a] = payoff(a, b) - min_entry;
    coeffs[rows] = -1.0;
    lp.AddRow(std::move(coeffs), RowSense::kGreaterEqual, 0.0);
  }
  std::vector<double> simplex(rows + 1, 1.0);
  simplex[rows] = 0.0;
  lp.AddRow(std::move(simplex), RowSense::kEqual, 1.0);

  LpSolution solution = SolveLp(lp);
  if (solution.status != LpStatus::kOptimal) {
    throw std::logic_error("SolveZeroSum: game LP not solved to optimality");
  }
  MixedStrategy strategy = CleanDistribution(
      std::vector<double>(solution.x.begin(), solution.x.begin() + rows));
  double value = std::numeric_limits<double>::infinity();
  for (int b = 0; b < cols; ++b) {
    double column = 0.0;
    for (int a = 0; a < rows; ++a) column += strategy[a] * payoff(a, b);
    value = std::min(value, column);
  }
  return {std::move(strategy), value};
}

}  // namespace

Matrix::Matrix(int rows, int cols)
    : Matrix(rows, cols, std::vector<double>(rows * cols, 0.0)) {}

Matrix::Matrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("Matrix: dimensions must be positive");
  }
  if (entries_.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument("Matrix: entry count mismatch");
  }
}

Matrix Matrix::FromRows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const int num_rows = static_cast<int>(rows.size());
  const int num_cols = num_rows > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  std::vector<double> entries;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != num_cols) {
      throw std::invalid_argument("Matrix::FromRows: ragged rows");
    }
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return Matrix(num_rows, num_cols, std::move(entries));
}

Matrix Matrix::Transposed() const {
  Matrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

Matrix Matrix::Negated() const {
  Matrix n = *this;
  for (double& v : n.entries_) v = -v;
  return n;
}

JointDistribution::JointDistribution(int rows, int cols,
                                     std::vector<double> probs)
    : rows_(rows), cols_(cols), probs_(std::move(probs)) {
  if (probs_.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument("JointDistribution: size mismatch");
  }
}

ZeroSumSolution SolveZeroSum(const Matrix& payoff) {
  for (double v : payoff.entries()) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("SolveZeroSum: non-finite payoff");
    }
  }
  auto [mu, value] = SolveRowPlayer(payoff);
  // The column player's minimax strategy is the row strategy of -Q^T.
  auto [nu, negated_value] = SolveRowPlayer(payoff.Transposed().Negated());
  (void)negated_value;
  return {std::move(mu), std::move(nu), value};
}

double ZeroSumExploitability(const Matrix& payoff, std::span<const double> mu,
                             std::span<const double> nu) {
  double best_row = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < payoff.rows(); ++a) {
    double v = 0.0;
    for (int b = 0; b < payoff.cols(); ++b) v += payoff(a, b) * nu[b];
    best_row = std::max(best_row, v);
  }
  double best_col = std::numeric_limits<double>::infinity();
  for (int b = 0; b < payoff.cols(); ++b) {
    double v = 0.0;
    for (int a = 0; a < payoff.rows(); ++a) v += payoff(a, b) * mu[a];
    best_col = std::min(best_col, v);
  }
  return best_row - best_col;
}

JointDistribution ComputeCce(const Matrix& upper, const Matrix& lower) {
  if (upper.rows() != lower.rows() || upper.cols() != lower.cols()) {
    throw std::invalid_argument("ComputeCce: shape mismatch");
  }
  const int rows = upper.rows();
  const int cols = upper.cols();
  const int pairs = rows * cols;

  // Slack variable m is free; shift by a bound on |m| so it is nonnegative.
  double range = 0.0;
  for (double v : upper.entries()) range = std::max(range, std::abs(v));
  for (double v : lower.entries()) range = std::max(range, std::abs(v));
  const double shift = 2.0 * range + 1.0;

  // Variables: pi(a, b) then m' = m + shift. Each deviation row reads
  //   sum_{a,b} pi(a,b) gain(a,b) - m' >= -shift.
  LinearProgram lp(pairs + 1);
  lp.objective[pairs] = 1.0;
  for (int dev = 0; dev < rows; ++dev) {
    std::vector<double> coeffs(pairs + 1);
    for (int a = 0; a < rows; ++a) {
      for (int b = 0; b < cols; ++b) {
        coeffs[a * cols + b] = upper(a, b) - upper(dev, b);
      }
    }
    coeffs[pairs] = -1.0;
    lp.AddRow(std::move(coeffs), RowSense::kGreaterEqual, -shift);
  }
  for (int dev = 0; dev < cols; ++dev) {
    std::vector<double> coeffs(pairs + 1);
    for (int a = 0; a < rows; ++a) {
      for (int b = 0; b < cols; ++b) {
        coeffs[a * cols + b] = lower(a, dev) - lower(a, b);
      }
    }
    coeffs[pairs] = -1.0;
    lp.AddRow(std::move(coeffs), RowSense::kGreaterEqual, -shift);
  }
  std::vector<double> simplex(pairs + 1, 1.0);
  simplex[pairs] = 0.0;
  lp.AddRow(std::move(simplex), RowSense::kEqual, 1.0);

  const LpSolution solution = SolveLp(lp);
  if (solution.status != LpStatus::kOptimal) {
    throw std::logic_error("ComputeCce: LP not solved to optimality");
  }
  return JointDistribution(
      rows, cols,
      CleanDistribution(std::vector<double>(solution.x.begin(),
                                            solution.x.begin() + pairs)));
}

double CceViolation(const Matrix& upper, const Matrix& lower,
                    const JointDistribution& pi) {
  const double upper_value = Expectation(upper, pi);
  const double lower_value = Expectation(lower, pi);
  double worst = -std::numeric_limits<double>::infinity();
  for (int dev = 0; dev < upper.rows(); ++dev) {
    double deviation = 0.0;
    for (int a = 0; a < pi.rows(); ++a) {
      for (int b = 0; b < pi.cols(); ++b) deviation += pi(a, b) * upper(dev, b);
    }
    worst = std::max(worst, deviation - upper_value);
  }
  for (int dev = 0; dev < lower.cols(); ++dev) {
    double deviation = 0.0;
    for (int a = 0; a < pi.rows(); ++a) {
      for (int b = 0; b < pi.cols(); ++b) deviation += pi(a, b) * lower(a, dev);
    }
    worst = std::max(worst, lower_value - deviation);
  }
  return worst;
}

std::pair<MixedStrategy, MixedStrategy> CceMarginals(
    const JointDistribution& pi) {
  MixedStrategy rows(pi.rows(), 0.0), cols(pi.cols(), 0.0);
  for (int a = 0; a < pi.rows(); ++a) {
    for (int b = 0; b < pi.cols(); ++b) {
      rows[a] += pi(a, b);
      cols[b] += pi(a, b);
    }
  }
  return {std::move(rows), std::move(cols)};
}

double Expectation(const Matrix& payoff, const JointDistribution& pi) {
  double total = 0.0;
  for (int a = 0; a < pi.rows(); ++a) {
    for (int b = 0; b < pi.cols(); ++b) total += pi(a, b) * payoff(a, b);
  }
  return total;
}

}  // namespace nashplay
