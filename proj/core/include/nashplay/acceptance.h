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
#ifndef NASHPLAY_ACCEPTANCE_H_
#define NASHPLAY_ACCEPTANCE_H_

#include <functional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace nashplay {

struct SubCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::vector<SubCheck> checks;
  double seconds = 0.0;
  double time_limit = 0.0;
  bool within_time = true;

  bool passed() const;
  // "PASS  3 oracle_equivalence  1.20s/30s  ..." on one line.
  std::string Line() const;
  nlohmann::json ToJson() const;
};

using AlphaSchedule = std::function<double(int t, int horizon)>;

struct AcceptanceOptions {
  // Reduced problem sizes for a quick end-to-end pass.
  bool smoke = false;
  AlphaSchedule alpha;  // defaults to the learners' schedule
  int threads = 0;
  std::set<int> only;  // empty: all criteria
};

CriterionResult CheckScheduleIdentities(const AlphaSchedule& alpha);
CriterionResult CheckCce(bool smoke);
CriterionResult CheckOracleEquivalence(bool smoke);
CriterionResult CheckUpdateClosedForm(bool smoke);
// Criteria 5 and 6 share their training runs.
std::vector<CriterionResult> CheckSandwichAndGapDecay(bool smoke, int threads);
CriterionResult CheckCertifiedSoundness(bool smoke);
CriterionResult CheckBanditRegret(bool smoke);
CriterionResult CheckParityInstance(bool smoke);
CriterionResult CheckDeterminism(bool smoke);

std::vector<CriterionResult> RunAcceptance(const AcceptanceOptions& options);

}  // namespace nashplay

#endif  // NASHPLAY_ACCEPTANCE_H_
