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

#include "avalon/metrics.hpp"

#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace avalon {

double deduction_accuracy(std::span<const double> good_probability,
                          std::span<const Side> truth) {
  if (good_probability.size() != truth.size() || truth.empty()) {
    throw MetricError(fmt::format("probe covers {} seats, truth has {}",
                                  good_probability.size(), truth.size()));
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const Side guess = good_probability[i] >= 0.5 ? Side::kGood : Side::kEvil;
    if (guess == truth[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

Rate wilson(long hits, long trials, double z) {
  Rate r;
  r.hits = hits;
  r.trials = trials;
  if (trials <= 0) return r;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half =
      z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  r.value = p;
  r.low = std::max(0.0, centre - half);
  r.high = std::min(1.0, centre + half);
  return r;
}

BatchMetrics compute_metrics(std::span<const GameRecord> records,
                             const MetricOptions& options) {
  BatchMetrics m;
  long good = 0;
  long missions = 0;
  long assassinations = 0;
  long reached = 0;
  std::vector<double> scores;
  for (const GameRecord& r : records) {
    if (r.aborted || !r.result) {
      ++m.aborted;
      continue;
    }
    ++m.games;
    switch (*r.result) {
      case GameResult::kGoodWin:
        ++good;
        break;
      case GameResult::kEvilWinByMissions:
        ++missions;
        break;
      case GameResult::kEvilWinByAssassination:
        ++assassinations;
        break;
    }
    if (*r.result != GameResult::kEvilWinByMissions) ++reached;
    if (!r.roles) continue;
    std::vector<Side> truth;
    for (Role role : *r.roles) truth.push_back(side_of(role));
    for (const auto& probe : r.probes()) {
      if ((*r.roles).at(probe.seat) != Role::kServant) continue;
      if (options.probe_kind && r.agent_kinds.at(probe.seat) != *options.probe_kind) {
        continue;
      }
      scores.push_back(deduction_accuracy(probe.good_probability, truth));
    }
  }
  m.good_win = wilson(good, m.games);
  m.evil_win = wilson(missions + assassinations, m.games);
  m.evil_mission_win = wilson(missions, m.games);
  m.evil_assassination_win = wilson(assassinations, m.games);
  if (reached > 0) m.assassination_accuracy = wilson(assassinations, reached);
  if (!scores.empty()) {
    Mean d;
    d.count = static_cast<long>(scores.size());
    double sum = 0;
    for (double s : scores) sum += s;
    d.value = sum / static_cast<double>(d.count);
    double var = 0;
    for (double s : scores) var += (s - d.value) * (s - d.value);
    const double se =
        d.count > 1 ? std::sqrt(var / static_cast<double>(d.count - 1) /
                                static_cast<double>(d.count))
                    : 0.0;
    d.low = std::max(0.0, d.value - 1.96 * se);
    d.high = std::min(1.0, d.value + 1.96 * se);
    m.deduction = d;
  }
  return m;
}

void to_json(nlohmann::json& j, const Rate& r) {
  j = nlohmann::json{{"hits", r.hits},
                     {"trials", r.trials},
                     {"rate", r.value},
                     {"ci95", {r.low, r.high}}};
}

void to_json(nlohmann::json& j, const Mean& m) {
  j = nlohmann::json{
      {"count", m.count}, {"mean", m.value}, {"ci95", {m.low, m.high}}};
}

void to_json(nlohmann::json& j, const BatchMetrics& m) {
  j = nlohmann::json{{"games", m.games},
                     {"aborted", m.aborted},
                     {"good_win", m.good_win},
                     {"evil_win", m.evil_win},
                     {"evil_mission_win", m.evil_mission_win},
                     {"evil_assassination_win", m.evil_assassination_win}};
  j["assassination_accuracy"] = m.assassination_accuracy
                                    ? nlohmann::json(*m.assassination_accuracy)
                                    : nlohmann::json(nullptr);
  j["deduction_accuracy"] =
      m.deduction ? nlohmann::json(*m.deduction) : nlohmann::json(nullptr);
}

namespace {

std::string pct(const Rate& r) {
  return fmt::format("{:5.1f} [{:4.1f}, {:4.1f}]", 100 * r.value, 100 * r.low,
                     100 * r.high);
}

}  // namespace

std::string format_tables(const BatchMetrics& m, const std::string& label) {
  std::string out = fmt::format("{} games completed, {} aborted\n\n", m.games,
                                m.aborted);
  out += "Evil side (percent, Wilson 95% interval)\n";
  out += fmt::format("{:<12} {:<20} {:<20} {:<20} {:<20}\n", "setting",
                     "winrate", "mission win", "assass. win", "assass. acc");
  out += fmt::format(
      "{:<12} {:<20} {:<20} {:<20} {:<20}\n", label, pct(m.evil_win),
      pct(m.evil_mission_win), pct(m.evil_assassination_win),
      m.assassination_accuracy ? pct(*m.assassination_accuracy) : "n/a");
  out += "\nGood side\n";
  out += fmt::format("{:<12} {:<20} {:<20}\n", "setting", "winrate",
                     "deduction acc");
  out += fmt::format(
      "{:<12} {:<20} {:<20}\n", label, pct(m.good_win),
      m.deduction ? fmt::format("{:5.1f} [{:4.1f}, {:4.1f}]",
                                100 * m.deduction->value, 100 * m.deduction->low,
                                100 * m.deduction->high)
                  : "n/a");
  return out;
}

}  // namespace avalon
