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

#include "avalon/naive.hpp"

#include <algorithm>
#include <stdexcept>

namespace avalon {

NaivePolicy NaivePolicy::servant(Seat seat, int num_players, int num_evil,
                                 std::uint64_t seed) {
  NaivePolicy p(Role::kServant, seat, num_players, seed);
  p.belief_ = init_beliefs(num_players, num_evil, {{seat, Side::kGood}}, seat);
  return p;
}

NaivePolicy NaivePolicy::informed(Role role, Seat seat, std::vector<Side> sides,
                                  std::uint64_t seed) {
  if (role == Role::kServant) {
    throw std::invalid_argument("a Servant has no side knowledge");
  }
  NaivePolicy p(role, seat, static_cast<int>(sides.size()), seed);
  p.sides_ = std::move(sides);
  if (role == Role::kMinion) {
    const Team others = p.evil_seats().without(seat);
    if (others.size() == 1) p.assassin_ = others.seats().front();
  }
  return p;
}

Team NaivePolicy::evil_seats() const {
  Team t;
  for (Seat s = 0; s < static_cast<Seat>(sides_.size()); ++s) {
    if (sides_[s] == Side::kEvil) t = t.with(s);
  }
  return t;
}

Team NaivePolicy::random_team_with_self(int team_size) {
  std::vector<Team> options;
  for (Team t : all_teams(num_players_, team_size)) {
    if (t.contains(seat_)) options.push_back(t);
  }
  return rng_.pick(options);
}

Team NaivePolicy::random_clean_team(int team_size) {
  const Team evil = evil_seats();
  std::vector<Team> options;
  int fewest = team_size + 1;
  for (Team t : all_teams(num_players_, team_size)) {
    const int bad = (t & evil).size();
    if (bad < fewest) {
      fewest = bad;
      options.clear();
    }
    if (bad == fewest) options.push_back(t);
  }
  return rng_.pick(options);
}

Seat NaivePolicy::random_good_target() {
  std::vector<Seat> good;
  for (Seat s = 0; s < static_cast<Seat>(sides_.size()); ++s) {
    if (sides_[s] == Side::kGood) good.push_back(s);
  }
  return rng_.pick(good);
}

bool NaivePolicy::assassin_on(Team team) const {
  return assassin_ && team.contains(*assassin_);
}

Team NaivePolicy::servant_propose(int team_size) {
  return rng_.pick(best_teams(*belief_, team_size, last_success_));
}

TeamVote NaivePolicy::servant_vote(Team proposed, int team_size) const {
  const auto x = team_preference(*belief_, proposed, std::nullopt).x;
  return x == max_clean_probability(*belief_, team_size) ? TeamVote::kApprove
                                                         : TeamVote::kReject;
}

Action NaivePolicy::merlin_act(Phase phase, int team_size,
                               const std::optional<Team>& team) {
  switch (phase) {
    case Phase::kTeamSelection:
      return ProposeTeam{random_clean_team(team_size)};
    case Phase::kTeamVoting:
      return VoteTeam{(*team & evil_seats()).empty() ? TeamVote::kApprove
                                                     : TeamVote::kReject};
    case Phase::kQuest:
      return VoteQuest{QuestVote::kPass};
    default:
      throw std::logic_error("Merlin has no action in this phase");
  }
}

Action NaivePolicy::minion_act(Phase phase, int team_size,
                               const std::optional<Team>& team) {
  switch (phase) {
    case Phase::kTeamSelection:
      return ProposeTeam{random_team_with_self(team_size)};
    case Phase::kTeamVoting:
      return VoteTeam{(*team & evil_seats()).empty() ? TeamVote::kReject
                                                     : TeamVote::kApprove};
    case Phase::kQuest:
      return VoteQuest{assassin_on(*team) ? QuestVote::kPass : QuestVote::kFail};
    default:
      throw std::logic_error("the Minion has no action in this phase");
  }
}

Action NaivePolicy::assassin_act(Phase phase, int team_size,
                                 const std::optional<Team>& team) {
  switch (phase) {
    case Phase::kTeamSelection:
      return ProposeTeam{random_team_with_self(team_size)};
    case Phase::kTeamVoting:
      return VoteTeam{(*team & evil_seats()).empty() ? TeamVote::kReject
                                                     : TeamVote::kApprove};
    case Phase::kQuest:
      return VoteQuest{QuestVote::kFail};
    case Phase::kAssassination:
      return Assassinate{random_good_target()};
    default:
      throw std::logic_error("the Assassin has no action in this phase");
  }
}

Action NaivePolicy::act(Phase phase, int team_size,
                        const std::optional<Team>& team) {
  switch (role_) {
    case Role::kMerlin:
      return merlin_act(phase, team_size, team);
    case Role::kMinion:
      return minion_act(phase, team_size, team);
    case Role::kAssassin:
      return assassin_act(phase, team_size, team);
    case Role::kServant:
      break;
  }
  switch (phase) {
    case Phase::kTeamSelection:
      return ProposeTeam{servant_propose(team_size)};
    case Phase::kTeamVoting:
      return VoteTeam{servant_vote(*team, team_size)};
    case Phase::kQuest:
      return VoteQuest{QuestVote::kPass};
    default:
      throw std::logic_error("a Servant has no action in this phase");
  }
}

void NaivePolicy::on_mission_result(Team team, int fails) {
  if (fails == 0) {
    last_success_ = team;
  } else if (belief_) {
    belief_ = update_on_quest(*belief_, team, fails);
  }
}

std::vector<double> NaivePolicy::believed_sides() const {
  std::vector<double> out(static_cast<std::size_t>(num_players_), 0.0);
  for (Seat s = 0; s < num_players_; ++s) {
    if (belief_) {
      out[s] = posterior_good(*belief_, s);
    } else {
      out[s] = sides_[s] == Side::kGood ? 1.0 : 0.0;
    }
  }
  return out;
}

void NaiveAgent::start(const Observation& obs) {
  if (obs.role == Role::kServant) {
    policy_ = NaivePolicy::servant(obs.seat, obs.num_players, obs.num_evil,
                                   seed_);
  } else {
    policy_ = NaivePolicy::informed(obs.role, obs.seat, *obs.side_knowledge,
                                    seed_);
  }
  if (speaker_) speaker_->start(obs);
}

void NaiveAgent::ensure_started(const Observation& obs) {
  if (!policy_) start(obs);
}

Action NaiveAgent::decide(const Observation& obs) {
  ensure_started(obs);
  if (obs.discussing) return Say{speak(obs)};
  return policy_->act(obs.phase, obs.current_team_size(), obs.current_team);
}

std::string NaiveAgent::speak(const Observation& obs) {
  return speaker_ ? speaker_->speak(obs) : std::string();
}

void NaiveAgent::on_event(const GameEvent& event) {
  if (speaker_) speaker_->on_event(event);
}

std::vector<event::AgentAnomaly> NaiveAgent::take_anomalies() {
  return speaker_ ? speaker_->take_anomalies()
                  : std::vector<event::AgentAnomaly>{};
}

std::vector<double> NaiveAgent::probe_sides(const Observation& obs) {
  ensure_started(obs);
  return policy_->believed_sides();
}

void NaiveAgent::on_mission_result(const Observation& obs,
                                   const MissionRecord& record) {
  ensure_started(obs);
  policy_->on_mission_result(record.team, record.fail_votes);
  if (speaker_) speaker_->on_mission_result(obs, record);
}

}  // namespace avalon
