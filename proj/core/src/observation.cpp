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

#include "avalon/observation.hpp"

namespace avalon {

std::optional<Team> Observation::last_success() const {
  for (auto it = mission_ledger.rbegin(); it != mission_ledger.rend(); ++it) {
    if (it->outcome == MissionOutcome::kSuccess) return it->team;
  }
  return std::nullopt;
}

Observation make_observation(const GameState& s, Seat seat) {
  Observation o;
  o.seat = seat;
  o.role = s.roles.at(seat);
  o.num_players = s.config.num_players;
  o.num_evil = s.config.num_evil();
  if (o.role != Role::kServant) {
    std::vector<Side> sides;
    for (Role r : s.roles) sides.push_back(side_of(r));
    o.side_knowledge = std::move(sides);
  }
  o.phase = s.phase;
  o.discussing = s.discussing();
  o.speaker = s.current_speaker();
  if (s.discussion) o.discussion_order = s.discussion->order;
  o.current_mission = s.current_mission;
  o.leader = s.leader;
  o.consecutive_rejections = s.consecutive_rejections;
  o.mission_team_sizes = s.config.mission_team_sizes;
  o.fails_required = s.config.fails_required;
  o.discussion_sentence_limit = s.config.discussion_sentence_limit;
  o.current_team = s.current_team;
  o.mission_ledger = s.mission_ledger;
  if (s.config.reveal_vote_history_to_agents) {
    o.proposal_history = s.proposal_history;
  }
  o.minutes = s.minutes;
  o.legal_actions = legal_actions(s, seat);
  o.result = s.result;
  return o;
}

}  // namespace avalon
