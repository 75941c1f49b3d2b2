// Copyright 2026 The Avalon Arena Authors
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

// JSON encodings shared by replay files, the gateway and the CLI. Every
// tagged value carries a "type" key; seats are 0-based integers and teams
// are sorted seat arrays.

#pragma once

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "avalon/observation.hpp"

namespace avalon {

/// Malformed or unknown JSON input.
class WireError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void to_json(nlohmann::json& j, const Team& team);
void from_json(const nlohmann::json& j, Team& team);

void to_json(nlohmann::json& j, const GameConfig& config);
/// Fields left out fall back to the preset for "num_players".
void from_json(const nlohmann::json& j, GameConfig& config);

void to_json(nlohmann::json& j, const Action& action);
void from_json(const nlohmann::json& j, Action& action);

void to_json(nlohmann::json& j, const Utterance& u);
void from_json(const nlohmann::json& j, Utterance& u);
void to_json(nlohmann::json& j, const ProposalRecord& p);
void from_json(const nlohmann::json& j, ProposalRecord& p);
void to_json(nlohmann::json& j, const MissionRecord& m);
void from_json(const nlohmann::json& j, MissionRecord& m);

void to_json(nlohmann::json& j, const GameEvent& e);
void from_json(const nlohmann::json& j, GameEvent& e);

void to_json(nlohmann::json& j, const Observation& o);

/// Wire names for enum values.
std::string_view team_vote_key(TeamVote v);
std::string_view quest_vote_key(QuestVote v);
std::string_view side_key(Side s);
std::string_view outcome_key(MissionOutcome o);
std::string_view event_type(const GameEvent& e);

/// Parses a whole JSON value, mapping any decoding failure to WireError.
template <typename T>
T decode(const nlohmann::json& j) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw WireError(e.what());
  }
}

}  // namespace avalon

// GameEvent's alternatives live in avalon::event, out of reach of
// argument-dependent lookup for the functions above.
template <>
struct nlohmann::adl_serializer<avalon::GameEvent> {
  static void to_json(nlohmann::json& j, const avalon::GameEvent& e) {
    avalon::to_json(j, e);
  }
  static void from_json(const nlohmann::json& j, avalon::GameEvent& e) {
    avalon::from_json(j, e);
  }
};
