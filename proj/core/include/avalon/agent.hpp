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

#include <stdexcept>
#include <string>
#include <vector>

#include "avalon/observation.hpp"

namespace avalon {

/// An agent could not produce a usable answer (transport, parse, timeout).
class AgentFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The seat contract shared by naive bots, LLM players and remote humans.
/// A seat only ever sees Observations built for it and public events.
class Agent {
 public:
  virtual ~Agent() = default;

  /// Short label for records, e.g. "naive" or "llm".
  virtual std::string kind() const = 0;

  /// Called once before the first decision.
  virtual void start(const Observation& /*obs*/) {}

  /// Returns an action for the current step, or throws AgentFailure.
  virtual Action decide(const Observation& obs) = 0;

  /// Returns this seat's utterance for its discussion slot.
  virtual std::string speak(const Observation& obs) = 0;

  /// Per-seat probability of being Good, each in [0, 1].
  virtual std::vector<double> probe_sides(const Observation& obs) = 0;

  /// Public game events, in order.
  virtual void on_event(const GameEvent& /*event*/) {}

  virtual void on_mission_result(const Observation& /*obs*/,
                                 const MissionRecord& /*record*/) {}

  /// Problems the agent recovered from on its own since the last call,
  /// such as a failed recap. The orchestrator logs them.
  virtual std::vector<event::AgentAnomaly> take_anomalies() { return {}; }
};

}  // namespace avalon
