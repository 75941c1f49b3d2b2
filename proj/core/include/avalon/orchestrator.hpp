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

#include <span>
#include <vector>

#include "avalon/agent.hpp"

namespace avalon {

enum class ProbeTiming {
  /// Once, after the deciding mission and before assassination.
  kAfterFinalMission,
  kNever,
};

struct OrchestratorOptions {
  /// Extra attempts after an agent fails or answers illegally.
  int max_retries = 1;
  ProbeTiming probe = ProbeTiming::kAfterFinalMission;
};

/// The action a seat receives when its agent cannot answer: reject a team,
/// pass (Good) or fail (Evil) a quest, propose the lowest legal team that
/// includes the leader, or strike a seat believed Good.
Action default_action(const GameState& state, Seat seat);

/// Asks one agent for a legal action, retrying up to max_retries times and
/// falling back to default_action with a recorded anomaly.
Action obtain_action(Agent& agent, const GameState& state, Seat seat,
                     const OrchestratorOptions& options,
                     std::vector<GameEvent>& anomalies);

/// False for bookkeeping events (anomalies, probes) that agents never see.
bool is_engine_event(const GameEvent& e);

/// Forwards engine events to every non-null agent and reports resolved
/// quests through on_mission_result.
void dispatch_events(const GameState& after, std::span<const GameEvent> events,
                     std::span<Agent* const> agents);

/// True when `events` resolved the quest that decided the missions.
bool missions_decided(const GameState& after, std::span<const GameEvent> events);

/// Collects believed-sides probes from every Servant with an agent.
void probe_servants(const GameState& state, std::span<Agent* const> agents,
                    std::vector<GameEvent>& out);

/// Builds an observation for each seat the step needs, collects every
/// answer, and only then applies them. Simultaneous ballots are therefore
/// sealed from one another. Agents receive the resulting public events.
Transition drive_turn(const GameState& state, std::span<Agent* const> agents,
                      const OrchestratorOptions& options = {});

/// Runs speaking slots until the active discussion round closes.
Transition run_discussion(const GameState& state,
                          std::span<Agent* const> agents,
                          const OrchestratorOptions& options = {});

/// Sends the opening events to every agent and calls start().
void start_agents(const GameState& state, std::span<const GameEvent> events,
                  std::span<Agent* const> agents);

/// Plays a game to the end, driving turns one at a time.
class Match {
 public:
  Match(const GameConfig& config, std::uint64_t seed,
        std::vector<Agent*> agents, OrchestratorOptions options = {},
        const std::optional<std::vector<Role>>& fixed_roles = {});

  /// Advances one step. Returns false once the game is over.
  bool step();
  void play();

  const GameState& state() const { return state_; }
  const std::vector<GameEvent>& log() const { return log_; }

 private:
  GameState state_;
  std::vector<GameEvent> log_;
  std::vector<Agent*> agents_;
  OrchestratorOptions options_;
};

}  // namespace avalon
