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
#ifndef NASHPLAY_SNAPSHOT_H_
#define NASHPLAY_SNAPSHOT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "nashplay/nash_q.h"
#include "nashplay/nash_v.h"

namespace nashplay {

enum class Algorithm { kNashQ, kNashV };
const char* AlgorithmName(Algorithm algorithm);  // "nash_q" / "nash_v"
Algorithm ParseAlgorithm(std::string_view name);

struct SnapshotHeader {
  Algorithm algorithm = Algorithm::kNashQ;
  std::uint64_t config_hash = 0;
  std::string version;
};

// Exactly one of q / v is set, matching header.algorithm.
struct Snapshot {
  SnapshotHeader header;
  std::optional<NashQHistory> q;
  std::optional<NashVHistory> v;
};

// Little-endian binary: magic "NASHSNAP", format version, header, game,
// hyperparameters, traces, visit lists, policy change logs, trajectories.
inline constexpr std::uint32_t kSnapshotFormatVersion = 1;

std::string SerializeSnapshot(const SnapshotHeader& header,
                              const NashQHistory& history);
std::string SerializeSnapshot(const SnapshotHeader& header,
                              const NashVHistory& history);
// Throws std::runtime_error on malformed or truncated input.
Snapshot DeserializeSnapshot(std::string_view bytes);

void WriteSnapshot(const std::string& path, const std::string& bytes);
Snapshot ReadSnapshot(const std::string& path);

}  // namespace nashplay

#endif  // NASHPLAY_SNAPSHOT_H_
