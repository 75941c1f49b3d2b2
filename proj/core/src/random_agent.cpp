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


#include "avalon/random_agent.hpp"

namespace avalon {

Action RandomAgent::decide(const Observation& obs) {
  if (obs.discussing) return Say{speak(obs)};
  if (obs.legal_actions.empty()) throw AgentFailure("nothing to do");
  return rng_.pick(obs.legal_actions);
}

std::string RandomAgent::speak(const Observation& obs) {
  return rng_.uniform(2) == 0
             ? std::string()
             : "I am player " + std::to_string(obs.seat) + ". Trust me.";
}

std::vector<double> RandomAgent::probe_sides(const Observation& obs) {
  std::vector<double> out;
  for (int i = 0; i < obs.num_players; ++i) out.push_back(rng_.unit());
  return out;
}

}  // namespace avalon
