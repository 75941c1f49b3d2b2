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

#include <string>
#include <vector>

#include "avalon/replay.hpp"

namespace avalon {

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> problems;
};

/// Recounts a record from its events alone, without the engine: team
/// sizes, vote tallies, the rejection track, leader rotation, quest
/// thresholds, the end condition and the recorded result. Role-dependent
/// checks run only when the record carries roles.
VerifyReport verify_record(const GameRecord& record);

}  // namespace avalon
