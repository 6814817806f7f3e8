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
#ifndef NASHPLAY_LEARNER_LOG_H_
#define NASHPLAY_LEARNER_LOG_H_

#include <cstddef>
#include <span>
#include <vector>

namespace nashplay {

// Episodes (1-based, strictly increasing) in which each key was visited.
class VisitLog {
 public:
  VisitLog() = default;
  explicit VisitLog(std::size_t num_keys) : episodes_(num_keys) {}

  void Record(std::size_t key, int episode);
  // Visits strictly before `episode`, i.e. the count at its beginning.
  int CountBefore(std::size_t key, int episode) const;
  // Episode of the m-th visit, m in [1, total visits].
  int Episode(std::size_t key, int m) const { return episodes_[key][m - 1]; }
  const std::vector<int>& episodes(std::size_t key) const {
    return episodes_[key];
  }
  std::size_t num_keys() const { return episodes_.size(); }

 private:
  std::vector<std::vector<int>> episodes_;
};

// Copy-on-write history of policy rows. Row (h, s) starts at the initial
// row; a change recorded during episode k is in force from episode k + 1 on.
class PolicyLog {
 public:
  struct Change {
    int episode;
    std::vector<double> row;
  };

  PolicyLog() = default;
  PolicyLog(int horizon, int num_states, std::vector<double> initial_row);

  void Record(int h, int s, int episode, std::vector<double> row);
  // Row in force at the beginning of `episode`.
  std::span<const double> RowAt(int h, int s, int episode) const;

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  const std::vector<double>& initial_row() const { return initial_row_; }
  const std::vector<Change>& changes(int h, int s) const {
    return changes_[static_cast<std::size_t>(h) * num_states_ + s];
  }

 private:
  int horizon_ = 0;
  int num_states_ = 0;
  std::vector<double> initial_row_;
  std::vector<std::vector<Change>> changes_;
};

}  // namespace nashplay

#endif  // NASHPLAY_LEARNER_LOG_H_
