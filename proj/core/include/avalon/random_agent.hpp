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

#include <cstdint>

#include "avalon/agent.hpp"
#include "avalon/rng.hpp"

namespace avalon {

/// Picks uniformly among the legal actions. Used to fuzz the engine.
class RandomAgent : public Agent {
 public:
  explicit RandomAgent(std::uint64_t seed) : rng_(Pcg32::from_seed(seed)) {}

  std::string kind() const override { return "random"; }
  Action decide(const Observation& obs) override;
  std::string speak(const Observation& obs) override;
  std::vector<double> probe_sides(const Observation& obs) override;

 private:
  Pcg32 rng_;
};

}  // namespace avalon
