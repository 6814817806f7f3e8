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
#include <vector>

#include <gtest/gtest.h>

#include "nashplay/lp.h"
#include "nashplay/rng.h"

namespace nashplay {
namespace {

Matrix RandomMatrix(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = rng.Uniform();
  }
  return m;
}

TEST(LpTest, SmallMaximization) {
  // max 3x + 2y  s.t. x + y <= 4, x + 3y <= 6, x <= 3.
  LinearProgram lp(2);
  lp.objective = {3.0, 2.0};
  lp.AddRow({1.0, 1.0}, RowSense::kLessEqual, 4.0);
  lp.AddRow({1.0, 3.0}, RowSense::kLessEqual, 6.0);
  lp.AddRow({1.0, 0.0}, RowSense::kLessEqual, 3.0);
  const LpSolution sol = SolveLp(lp);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 11.0, 1e-12);
  EXPECT_NEAR(sol.x[0], 3.0, 1e-12);
  EXPECT_NEAR(sol.x[1], 1.0, 1e-12);
}

TEST(LpTest, EqualityAndGreaterRows) {
  // max -x - y  s.t. x + y = 2, x >= 0.5.
  LinearProgram lp(2);
  lp.objective = {-1.0, -1.0};
  lp.AddRow({1.0, 1.0}, RowSense::kEqual, 2.0);
  lp.AddRow({1.0, 0.0}, RowSense::kGreaterEqual, 0.5);
  const LpSolution sol = SolveLp(lp);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, -2.0, 1e-12);
  EXPECT_GE(sol.x[0], 0.5 - 1e-12);
}

TEST(LpTest, DetectsInfeasibleAndUnbounded) {
  LinearProgram infeasible(1);
  infeasible.AddRow({1.0}, RowSense::kLessEqual, 1.0);
  infeasible.AddRow({1.0}, RowSense::kGreaterEqual, 2.0);
  EXPECT_EQ(SolveLp(infeasible).status, LpStatus::kInfeasible);

  LinearProgram unbounded(2);
  unbounded.objective = {1.0, 0.0};
  unbounded.AddRow({0.0, 1.0}, RowSense::kLessEqual, 1.0);
  EXPECT_EQ(SolveLp(unbounded).status, LpStatus::kUnbounded);
}

TEST(SolveZeroSumTest, OneByOne) {
  const auto sol = SolveZeroSum(Matrix::FromRows({{0.7}}));
  EXPECT_NEAR(sol.value, 0.7, 1e-12);
  EXPECT_NEAR(sol.max_strategy[0], 1.0, 1e-12);
  EXPECT_NEAR(sol.min_strategy[0], 1.0, 1e-12);
}

TEST(SolveZeroSumTest, MatchingPennies) {
  const auto sol = SolveZeroSum(Matrix::FromRows({{1, 0}, {0, 1}}));
  EXPECT_NEAR(sol.value, 0.5, 1e-12);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(sol.max_strategy[i], 0.5, 1e-12);
    EXPECT_NEAR(sol.min_strategy[i], 0.5, 1e-12);
  }
}

TEST(SolveZeroSumTest, MixedTwoByTwoClosedForm) {
  const Matrix q = Matrix::FromRows({{0.8, 0.2}, {0.3, 0.6}});
  const auto sol = SolveZeroSum(q);
  const double expected = (0.8 * 0.6 - 0.2 * 0.3) / (0.8 + 0.6 - 0.2 - 0.3);
  EXPECT_NEAR(sol.value, expected, 1e-12);
  EXPECT_NEAR(sol.value, 0.46667, 1e-5);
  EXPECT_LE(ZeroSumExploitability(q, sol.max_strategy, sol.min_strategy), 1e-8);
}

TEST(SolveZeroSumTest, DualityUnderTransposeAndNegation) {
  Rng rng(200);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 1 + rng.UniformInt(5);
    const int cols = 1 + rng.UniformInt(5);
    const Matrix q = RandomMatrix(rows, cols, rng);
    const auto sol = SolveZeroSum(q);
    const auto dual = SolveZeroSum(q.Transposed().Negated());
    EXPECT_NEAR(sol.value, -dual.value, 1e-8);
    EXPECT_LE(ZeroSumExploitability(q, sol.max_strategy, sol.min_strategy),
              1e-8);
  }
}

TEST(ComputeCceTest, MatchingPenniesMarginalsAreNash) {
  const Matrix q = Matrix::FromRows({{1, 0}, {0, 1}});
  const auto pi = ComputeCce(q, q);
  const auto [mu, nu] = CceMarginals(pi);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(mu[i], 0.5, 1e-8);
    EXPECT_NEAR(nu[i], 0.5, 1e-8);
  }
}

TEST(ComputeCceTest, ConstantMatrixGivesValidDistribution) {
  const Matrix q = Matrix::FromRows({{0.4, 0.4, 0.4}, {0.4, 0.4, 0.4}});
  const auto pi = ComputeCce(q, q);
  double total = 0.0;
  for (double p : pi.probs()) {
    EXPECT_GE(p, 0.0);
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-9);
  EXPECT_LE(CceViolation(q, q, pi), 1e-8);
}

// Audits every pure deviation directly instead of trusting CceViolation.
double AuditCce(const Matrix& up, const Matrix& low, const JointDistribution& pi) {
  double on_up = 0.0, on_low = 0.0;
  for (int a = 0; a < up.rows(); ++a) {
    for (int b = 0; b < up.cols(); ++b) {
      on_up += pi(a, b) * up(a, b);
      on_low += pi(a, b) * low(a, b);
    }
  }
  double worst = -1.0;
  for (int dev = 0; dev < up.rows(); ++dev) {
    double value = 0.0;
    for (int a = 0; a < up.rows(); ++a) {
      for (int b = 0; b < up.cols(); ++b) value += pi(a, b) * up(dev, b);
    }
    worst = std::max(worst, value - on_up);
  }
  for (int dev = 0; dev < up.cols(); ++dev) {
    double value = 0.0;
    for (int a = 0; a < up.rows(); ++a) {
      for (int b = 0; b < up.cols(); ++b) value += pi(a, b) * low(a, dev);
    }
    worst = std::max(worst, on_low - value);
  }
  return worst;
}

TEST(ComputeCceTest, RandomPairsSatisfyEveryDeviation) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 2 + rng.UniformInt(3);
    const int cols = 2 + rng.UniformInt(3);
    Matrix up = RandomMatrix(rows, cols, rng);
    Matrix low = RandomMatrix(rows, cols, rng);
    // Optimistic and pessimistic slices are ordered in the learner.
    for (int a = 0; a < rows; ++a) {
      for (int b = 0; b < cols; ++b) {
        if (low(a, b) > up(a, b)) std::swap(low(a, b), up(a, b));
      }
    }
    const auto pi = ComputeCce(up, low);
    EXPECT_LE(AuditCce(up, low, pi), 1e-8);
    double total = 0.0;
    for (double p : pi.probs()) {
      EXPECT_GE(p, -1e-12);
      total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(ComputeCceTest, SymmetricPairMarginalsAreNash) {
  Rng rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix q = RandomMatrix(3, 3, rng);
    const auto [mu, nu] = CceMarginals(ComputeCce(q, q));
    EXPECT_LE(ZeroSumExploitability(q, mu, nu), 1e-8);
  }
}

TEST(ComputeCceTest, IsDeterministic) {
  Rng rng(33);
  const Matrix up = RandomMatrix(3, 4, rng);
  const Matrix low = RandomMatrix(3, 4, rng);
  EXPECT_EQ(ComputeCce(up, low).probs(), ComputeCce(up, low).probs());
}

TEST(ComputeCceTest, ShapeMismatchThrows) {
  EXPECT_ANY_THROW(ComputeCce(Matrix(2, 2), Matrix(2, 3)));
}

TEST(CceMarginalsTest, ProductAndDiagonal) {
  const std::vector<double> mu = {0.25, 0.75};
  const std::vector<double> nu = {0.5, 0.125, 0.375};
  std::vector<double> product;
  for (double x : mu) {
    for (double y : nu) product.push_back(x * y);
  }
  const auto [m1, n1] = CceMarginals(JointDistribution(2, 3, product));
  for (int i = 0; i < 2; ++i) EXPECT_DOUBLE_EQ(m1[i], mu[i]);
  for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(n1[j], nu[j]);

  const auto [m2, n2] = CceMarginals(JointDistribution(2, 2, {0.5, 0, 0, 0.5}));
  EXPECT_EQ(m2, (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(n2, (std::vector<double>{0.5, 0.5}));
}

TEST(ExpectationTest, WeightsEntries) {
  const Matrix q = Matrix::FromRows({{1, 2}, {3, 4}});
  EXPECT_DOUBLE_EQ(Expectation(q, JointDistribution(2, 2, {0.1, 0.2, 0.3, 0.4})),
                   0.1 + 0.4 + 0.9 + 1.6);
}

}  // namespace
}  // namespace nashplay
