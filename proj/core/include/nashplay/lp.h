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
#ifndef NASHPLAY_LP_H_
#define NASHPLAY_LP_H_

#include <vector>

namespace nashplay {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

// maximize objective . x  subject to rows, x >= 0.
struct LinearProgram {
  struct Row {
    std::vector<double> coefficients;
    RowSense sense;
    double rhs;
  };

  explicit LinearProgram(int num_variables)
      : num_variables(num_variables), objective(num_variables, 0.0) {}
  void AddRow(std::vector<double> coefficients, RowSense sense, double rhs);

  int num_variables;
  std::vector<double> objective;
  std::vector<Row> rows;
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
};

inline constexpr double kPivotEpsilon = 1e-12;

// Dense two-phase primal simplex. Bland's rule (lowest eligible column enters,
// ties in the ratio test go to the lowest basic variable) rules out cycling,
// so the result is a deterministic function of the input.
LpSolution SolveLp(const LinearProgram& lp);

}  // namespace nashplay

#endif  // NASHPLAY_LP_H_
