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

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "avalon/replay.hpp"

namespace avalon {

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fraction of seats whose believed side matches the truth. A probability
/// of at least 0.5 counts as a Good guess.
double deduction_accuracy(std::span<const double> good_probability,
                          std::span<const Side> truth);

/// A proportion with its Wilson score interval.
struct Rate {
  long hits = 0;
  long trials = 0;
  double value = 0.0;
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval at the given z (1.96 for 95%).
Rate wilson(long hits, long trials, double z = 1.96);

struct Mean {
  long count = 0;
  double value = 0.0;
  /// Normal-approximation 95% interval.
  double low = 0.0;
  double high = 0.0;
};

struct BatchMetrics {
  long games = 0;
  long aborted = 0;
  Rate good_win;
  Rate evil_win;
  Rate evil_mission_win;
  Rate evil_assassination_win;
  /// Merlin hits over games that reached assassination; absent if none did.
  std::optional<Rate> assassination_accuracy;
  /// Mean over every counted Servant probe; absent without probes.
  std::optional<Mean> deduction;
};

struct MetricOptions {
  /// Count only probes from Servant seats played by this agent kind.
  std::optional<std::string> probe_kind;
};

/// Aggregates completed records. Aborted records are counted, not rated.
BatchMetrics compute_metrics(std::span<const GameRecord> records,
                             const MetricOptions& options = {});

void to_json(nlohmann::json& j, const Rate& r);
void to_json(nlohmann::json& j, const Mean& m);
void to_json(nlohmann::json& j, const BatchMetrics& m);

/// Two text tables: side outcomes, then Servant deduction.
std::string format_tables(const BatchMetrics& m, const std::string& label);

}  // namespace avalon
