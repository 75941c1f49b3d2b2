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

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "avalon/game.hpp"

namespace avalon {

/// What one seat is allowed to know. Built only by make_observation.
struct Observation {
  Seat seat = 0;
  Role role = Role::kServant;
  int num_players = 0;
  int num_evil = 0;
  /// Sides of every seat; present for Merlin, Minion and Assassin only.
  std::optional<std::vector<Side>> side_knowledge;

  Phase phase = Phase::kTeamSelection;
  bool discussing = false;
  std::optional<Seat> speaker;
  std::vector<Seat> discussion_order;
  int current_mission = 0;
  Seat leader = 0;
  int consecutive_rejections = 0;
  std::array<int, kNumMissions> mission_team_sizes{};
  std::array<int, kNumMissions> fails_required{};
  int discussion_sentence_limit = 0;
  std::optional<Team> current_team;
  /// Teams, aggregate fail counts and outcomes.
  std::vector<MissionRecord> mission_ledger;
  /// Present only when the config reveals vote history to agents.
  std::optional<std::vector<ProposalRecord>> proposal_history;
  std::vector<Utterance> minutes;
  std::vector<Action> legal_actions;
  std::optional<GameResult> result;

  Side side() const { return side_of(role); }
  int current_team_size() const {
    return mission_team_sizes.at(current_mission);
  }
  /// The most recent successful mission's team.
  std::optional<Team> last_success() const;

  bool operator==(const Observation&) const = default;
};

Observation make_observation(const GameState& state, Seat seat);

}  // namespace avalon
