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
#include "nashplay/game_io.h"

#include <fstream>
#include <stdexcept>

namespace nashplay {

nlohmann::json GameToJson(const MarkovGame& game) {
  nlohmann::json doc;
  doc["h"] = game.horizon();
  doc["s"] = game.num_states();
  doc["a"] = game.num_max_actions();
  doc["b"] = game.num_min_actions();
  doc["s1"] = game.initial_state();
  doc["transitions"] = game.transitions();
  doc["rewards"] = game.rewards();
  return doc;
}

MarkovGame GameFromJson(const nlohmann::json& doc) {
  try {
    return MarkovGame(doc.at("h").get<int>(), doc.at("s").get<int>(),
                      doc.at("a").get<int>(), doc.at("b").get<int>(),
                      doc.at("transitions").get<std::vector<double>>(),
                      doc.at("rewards").get<std::vector<double>>(),
                      doc.at("s1").get<int>());
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed game document: ") +
                             e.what());
  }
}

void WriteGameFile(const MarkovGame& game, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << GameToJson(game).dump() << '\n';
}

MarkovGame ReadGameFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return GameFromJson(doc);
}

}  // namespace nashplay
