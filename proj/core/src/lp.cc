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
#include "nashplay/lp.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nashplay {
namespace {

constexpr double kPhaseOneTolerance = 1e-9;

// Tableau with one extra trailing column holding the right-hand side and one
// trailing row holding reduced costs (minimization form).
class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0),
        basis_(rows, -1) {}

  double& at(int r, int c) { return data_[r * (cols_ + 1) + c]; }
  double& rhs(int r) { return at(r, cols_); }
  double& cost(int c) { return at(rows_, c); }
  double& cost_value() { return at(rows_, cols_); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::vector<int>& basis() { return basis_; }

  void Pivot(int pr, int pc) {
    const double inv = 1.0 / at(pr, pc);
    for (int c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (int r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double factor = at(r, pc);
      if (factor == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) at(r, c) -= factor * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  // Loads cost vector c and prices out the current basis.
  void SetCosts(const std::vector<double>& c) {
    for (int j = 0; j < cols_; ++j) cost(j) = c[j];
    cost_value() = 0.0;
    for (int r = 0; r < rows_; ++r) {
      const double cb = c[basis_[r]];
      if (cb == 0.0) continue;
      for (int j = 0; j <= cols_; ++j) at(rows_, j) -= cb * at(r, j);
    }
  }

  // Minimizes the loaded costs over columns [0, allowed_cols).
  LpStatus Run(int allowed_cols) {
    const int max_iterations = 50 * (rows_ + cols_) + 1000;
    for (int iter = 0; iter < max_iterations; ++iter) {
      int entering = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (cost(j) < -kPivotEpsilon) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return LpStatus::kOptimal;
      int leaving = -1;
      double best_ratio = 0.0;
      for (int r = 0; r < rows_; ++r) {
        const double coeff = at(r, entering);
        if (coeff <= kPivotEpsilon) continue;
        const double ratio = rhs(r) / coeff;
        if (leaving < 0 || ratio < best_ratio - kPivotEpsilon ||
            (std::abs(ratio - best_ratio) <= kPivotEpsilon &&
             basis_[r] < basis_[leaving])) {
          leaving = r;
          best_ratio = ratio;
        }
      }
      if (leaving < 0) return LpStatus::kUnbounded;
      Pivot(leaving, entering);
    }
    throw std::logic_error("simplex iteration limit exceeded");
  }

 private:
  int rows_, cols_;
  std::vector<double> data_;
  std::vector<int> basis_;
};

}  // namespace

void LinearProgram::AddRow(std::vector<double> coefficients, RowSense sense,
                           double rhs) {
  if (static_cast<int>(coefficients.size()) != num_variables) {
    throw std::invalid_argument("LinearProgram::AddRow: wrong width");
  }
  rows.push_back({std::move(coefficients), sense, rhs});
}

LpSolution SolveLp(const LinearProgram& lp) {
  const int n = lp.num_variables;
  const int m = static_cast<int>(lp.rows.size());

  // Normalize to nonnegative right-hand sides.
  std::vector<LinearProgram::Row> rows = lp.rows;
  int num_slack = 0, num_artificial = 0;
  for (auto& row : rows) {
    if (row.rhs < 0.0) {
      for (double& v : row.coefficients) v = -v;
      row.rhs = -row.rhs;
      if (row.sense == RowSense::kLessEqual) {
        row.sense = RowSense::kGreaterEqual;
      } else if (row.sense == RowSense::kGreaterEqual) {
        row.sense = RowSense::kLessEqual;
      }
    }
    if (row.sense != RowSense::kEqual) ++num_slack;
    if (row.sense != RowSense::kLessEqual) ++num_artificial;
  }

  const int first_artificial = n + num_slack;
  const int cols = first_artificial + num_artificial;
  Tableau tableau(m, cols);
  int next_slack = n, next_artificial = first_artificial;
  for (int r = 0; r < m; ++r) {
    const auto& row = rows[r];
    for (int j = 0; j < n; ++j) tableau.at(r, j) = row.coefficients[j];
    tableau.rhs(r) = row.rhs;
    switch (row.sense) {
      case RowSense::kLessEqual:
        tableau.at(r, next_slack) = 1.0;
        tableau.basis()[r] = next_slack++;
        break;
      case RowSense::kGreaterEqual:
        tableau.at(r, next_slack++) = -1.0;
        tableau.at(r, next_artificial) = 1.0;
        tableau.basis()[r] = next_artificial++;
        break;
      case RowSense::kEqual:
        tableau.at(r, next_artificial) = 1.0;
        tableau.basis()[r] = next_artificial++;
        break;
    }
  }

  LpSolution solution;
  if (num_artificial > 0) {
    std::vector<double> phase_one(cols, 0.0);
    for (int j = first_artificial; j < cols; ++j) phase_one[j] = 1.0;
    tableau.SetCosts(phase_one);
    tableau.Run(cols);
    if (-tableau.cost_value() > kPhaseOneTolerance) {
      solution.status = LpStatus::kInfeasible;
      return solution;
    }
    // Drive artificial variables out of the basis where possible; rows with
    // no eligible pivot are redundant and keep a zero artificial.
    for (int r = 0; r < m; ++r) {
      if (tableau.basis()[r] < first_artificial) continue;
      for (int j = 0; j < first_artificial; ++j) {
        if (std::abs(tableau.at(r, j)) > kPivotEpsilon) {
          tableau.Pivot(r, j);
          break;
        }
      }
    }
  }

  std::vector<double> phase_two(cols, 0.0);
  for (int j = 0; j < n; ++j) phase_two[j] = -lp.objective[j];
  tableau.SetCosts(phase_two);
  solution.status = tableau.Run(first_artificial);
  if (solution.status != LpStatus::kOptimal) return solution;

  solution.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    const int var = tableau.basis()[r];
    if (var < n) solution.x[var] = std::max(0.0, tableau.rhs(r));
  }
  for (int j = 0; j < n; ++j) {
    solution.objective += lp.objective[j] * solution.x[j];
  }
  return solution;
}

}  // namespace nashplay
