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
#ifndef NASHPLAY_GAME_IO_H_
#define NASHPLAY_GAME_IO_H_

#include <string>

#include <nlohmann/json.hpp>

#include "nashplay/game.h"

namespace nashplay {

// JSON document {h, s, a, b, s1, transitions, rewards} with flat row-major
// tensors. Doubles are written in shortest round-trip form, so the decoded
// game compares equal to the encoded one.
nlohmann::json GameToJson(const MarkovGame& game);
MarkovGame GameFromJson(const nlohmann::json& doc);

void WriteGameFile(const MarkovGame& game, const std::string& path);
MarkovGame ReadGameFile(const std::string& path);

}  // namespace nashplay

#endif  // NASHPLAY_GAME_IO_H_
