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
#include "nashplay/learner_log.h"

#include <algorithm>
#include <stdexcept>

namespace nashplay {

void VisitLog::Record(std::size_t key, int episode) {
  auto& list = episodes_.at(key);
  if (!list.empty() && list.back() >= episode) {
    throw std::logic_error("VisitLog: episodes must strictly increase");
  }
  list.push_back(episode);
}

int VisitLog::CountBefore(std::size_t key, int episode) const {
  const auto& list = episodes_[key];
  return static_cast<int>(std::lower_bound(list.begin(), list.end(), episode) -
                          list.begin());
}

PolicyLog::PolicyLog(int horizon, int num_states,
                     std::vector<double> initial_row)
    : horizon_(horizon),
      num_states_(num_states),
      initial_row_(std::move(initial_row)),
      changes_(static_cast<std::size_t>(horizon) * num_states) {}

void PolicyLog::Record(int h, int s, int episode, std::vector<double> row) {
  auto& list = changes_[static_cast<std::size_t>(h) * num_states_ + s];
  if (!list.empty() && list.back().episode >= episode) {
    throw std::logic_error("PolicyLog: one change per row and episode");
  }
  list.push_back({episode, std::move(row)});
}

std::span<const double> PolicyLog::RowAt(int h, int s, int episode) const {
  const auto& list = changes_[static_cast<std::size_t>(h) * num_states_ + s];
  // Last change made strictly before `episode`.
  auto it = std::lower_bound(
      list.begin(), list.end(), episode,
      [](const Change& change, int k) { return change.episode < k; });
  if (it == list.begin()) return initial_row_;
  return std::prev(it)->row;
}

}  // namespace nashplay
