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

#include "avalon/orchestrator.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

#include "avalon/chat_client.hpp"
#include "avalon/rng.hpp"

namespace avalon {
namespace {

void check_agents(const GameState& state, std::span<Agent* const> agents) {
  if (static_cast<int>(agents.size()) != state.config.num_players) {
    throw std::invalid_argument(fmt::format(
        "{} agents for {} seats", agents.size(), state.config.num_players));
  }
  for (Agent* a : agents) {
    if (a == nullptr) throw std::invalid_argument("null agent");
  }
}

bool is_legal(const Action& action, const Observation& obs) {
  if (std::holds_alternative<Say>(action)) {
    return std::any_of(obs.legal_actions.begin(), obs.legal_actions.end(),
                       [](const Action& a) {
                         return std::holds_alternative<Say>(a);
                       });
  }
  return std::find(obs.legal_actions.begin(), obs.legal_actions.end(),
                   action) != obs.legal_actions.end();
}

}  // namespace

Action obtain_action(Agent& agent, const GameState& state, Seat seat,
                     const OrchestratorOptions& options,
                     std::vector<GameEvent>& anomalies) {
  const Observation obs = make_observation(state, seat);
  std::string detail;
  for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
    try {
      Action a = obs.discussing ? Action{Say{agent.speak(obs)}}
                                : agent.decide(obs);
      if (is_legal(a, obs)) return a;
      detail = "illegal action: " + describe(a);
    } catch (const CredentialError&) {
      throw;
    } catch (const std::exception& e) {
      detail = e.what();
    }
  }
  anomalies.push_back(event::AgentAnomaly{seat, "default_substituted", detail});
  return default_action(state, seat);
}

bool is_engine_event(const GameEvent& e) {
  return !std::holds_alternative<event::AgentAnomaly>(e) &&
         !std::holds_alternative<event::SidesProbed>(e);
}

void dispatch_events(const GameState& after, std::span<const GameEvent> events,
                     std::span<Agent* const> agents) {
  for (const GameEvent& e : events) {
    if (!is_engine_event(e)) continue;
    for (Agent* a : agents) {
      if (a) a->on_event(e);
    }
    if (const auto* q = std::get_if<event::QuestResolved>(&e)) {
      for (Seat s = 0; s < static_cast<Seat>(agents.size()); ++s) {
        if (agents[s]) {
          agents[s]->on_mission_result(make_observation(after, s), q->record);
        }
      }
    }
  }
}

bool missions_decided(const GameState& after, std::span<const GameEvent> events) {
  return std::any_of(events.begin(), events.end(),
                     [](const GameEvent& e) {
                       return std::holds_alternative<event::QuestResolved>(e);
                     }) &&
         (after.successes() >= 3 || after.failures() >= 3);
}

void probe_servants(const GameState& state, std::span<Agent* const> agents,
                    std::vector<GameEvent>& out) {
  const int n = state.config.num_players;
  for (Seat s = 0; s < n; ++s) {
    if (state.roles[s] != Role::kServant || !agents[s]) continue;
    try {
      auto p = agents[s]->probe_sides(make_observation(state, s));
      const bool valid =
          static_cast<int>(p.size()) == n &&
          std::all_of(p.begin(), p.end(),
                      [](double v) { return v >= 0.0 && v <= 1.0; });
      if (!valid) throw AgentFailure("probe returned a malformed vector");
      out.push_back(event::SidesProbed{s, std::move(p)});
    } catch (const CredentialError&) {
      throw;
    } catch (const std::exception& e) {
      out.push_back(event::AgentAnomaly{s, "probe_failed", e.what()});
    }
  }
}

Action default_action(const GameState& state, Seat seat) {
  if (state.discussing()) return Say{};
  switch (state.phase) {
    case Phase::kTeamVoting:
      return VoteTeam{TeamVote::kReject};
    case Phase::kQuest:
      return VoteQuest{state.side(seat) == Side::kGood ? QuestVote::kPass
                                                       : QuestVote::kFail};
    case Phase::kTeamSelection:
      for (Team t : all_teams(state.config.num_players,
                              state.current_team_size())) {
        if (t.contains(seat)) return ProposeTeam{t};
      }
      break;
    case Phase::kAssassination: {
      const Observation obs = make_observation(state, seat);
      std::vector<Seat> good;
      for (Seat s = 0; s < state.config.num_players; ++s) {
        if (s == seat) continue;
        if (!obs.side_knowledge || (*obs.side_knowledge)[s] == Side::kGood) {
          good.push_back(s);
        }
      }
      auto rng = Pcg32::from_seed(stream_seed(
          state.seed, static_cast<std::uint64_t>(seat), StreamPurpose::kDefault));
      return Assassinate{rng.pick(good)};
    }
    case Phase::kTerminal:
      break;
  }
  throw std::logic_error("no default action in this phase");
}

Transition drive_turn(const GameState& state, std::span<Agent* const> agents,
                      const OrchestratorOptions& options) {
  check_agents(state, agents);
  if (state.terminal()) return {state, {}};

  std::vector<GameEvent> events;
  std::vector<std::pair<Seat, Action>> batch;
  for (Seat seat : awaiting_seats(state)) {
    batch.emplace_back(seat,
                       obtain_action(*agents[seat], state, seat, options, events));
  }
  Transition t = apply_batch(state, batch);
  dispatch_events(t.state, t.events, agents);

  const bool decided = missions_decided(t.state, t.events);
  events.insert(events.end(), t.events.begin(), t.events.end());
  if (decided && options.probe == ProbeTiming::kAfterFinalMission) {
    probe_servants(t.state, agents, events);
  }
  for (Agent* a : agents) {
    for (auto& anomaly : a->take_anomalies()) events.emplace_back(std::move(anomaly));
  }
  return {std::move(t.state), std::move(events)};
}

Transition run_discussion(const GameState& state,
                          std::span<Agent* const> agents,
                          const OrchestratorOptions& options) {
  Transition out{state, {}};
  while (out.state.discussing()) {
    Transition t = drive_turn(out.state, agents, options);
    out.state = std::move(t.state);
    out.events.insert(out.events.end(), t.events.begin(), t.events.end());
  }
  return out;
}

void start_agents(const GameState& state, std::span<const GameEvent> events,
                  std::span<Agent* const> agents) {
  check_agents(state, agents);
  for (Seat s = 0; s < state.config.num_players; ++s) {
    agents[s]->start(make_observation(state, s));
  }
  for (const GameEvent& e : events) {
    if (!is_engine_event(e)) continue;
    for (Agent* a : agents) a->on_event(e);
  }
}

Match::Match(const GameConfig& config, std::uint64_t seed,
             std::vector<Agent*> agents, OrchestratorOptions options,
             const std::optional<std::vector<Role>>& fixed_roles)
    : agents_(std::move(agents)), options_(options) {
  Transition t = new_game(config, seed, fixed_roles);
  state_ = std::move(t.state);
  log_ = std::move(t.events);
  start_agents(state_, log_, agents_);
}

bool Match::step() {
  if (state_.terminal()) return false;
  Transition t = drive_turn(state_, agents_, options_);
  state_ = std::move(t.state);
  log_.insert(log_.end(), t.events.begin(), t.events.end());
  return !state_.terminal();
}

void Match::play() {
  while (step()) {
  }
}

}  // namespace avalon
