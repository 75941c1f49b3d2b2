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

// Rule-based baseline players.
//
// Servants track beliefs from mission outcomes and pick teams most likely to
// be all Good, breaking ties toward the last successful team. Merlin backs
// clean teams. Evil players seat themselves on teams, approve any team with
// an Evil member, and the Minion stays quiet on quests shared with the
// Assassin so that a mission shows a single fail.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "avalon/agent.hpp"
#include "avalon/beliefs.hpp"
#include "avalon/rng.hpp"

namespace avalon {

class NaivePolicy {
 public:
  /// A Servant who knows only their own side.
  static NaivePolicy servant(Seat seat, int num_players, int num_evil,
                             std::uint64_t seed);
  /// Merlin, Minion or Assassin, who know every seat's side.
  static NaivePolicy informed(Role role, Seat seat, std::vector<Side> sides,
                              std::uint64_t seed);

  Role role() const { return role_; }
  Seat seat() const { return seat_; }
  const std::optional<BeliefState>& belief() const { return belief_; }
  const std::optional<Team>& last_success() const { return last_success_; }

  /// Servant: a uniform draw from best_teams.
  Team servant_propose(int team_size);
  /// Servant: approve iff no team of this size is more likely all Good.
  TeamVote servant_vote(Team proposed, int team_size) const;

  Action merlin_act(Phase phase, int team_size, const std::optional<Team>& team);
  Action minion_act(Phase phase, int team_size, const std::optional<Team>& team);
  Action assassin_act(Phase phase, int team_size,
                      const std::optional<Team>& team);

  /// Dispatches on role.
  Action act(Phase phase, int team_size, const std::optional<Team>& team);

  /// Records an outcome: beliefs update on fails, successes move the
  /// tie-break anchor.
  void on_mission_result(Team team, int fails);

  /// Believed probability that each seat is Good.
  std::vector<double> believed_sides() const;

 private:
  NaivePolicy(Role role, Seat seat, int num_players, std::uint64_t seed)
      : role_(role), seat_(seat), num_players_(num_players),
        rng_(Pcg32::from_seed(seed)) {}

  Team evil_seats() const;
  Team random_team_with_self(int team_size);
  Team random_clean_team(int team_size);
  Seat random_good_target();
  bool assassin_on(Team team) const;

  Role role_;
  Seat seat_;
  int num_players_;
  Pcg32 rng_;
  std::optional<BeliefState> belief_;
  std::optional<Team> last_success_;
  std::vector<Side> sides_;
  /// The Assassin's seat, when the Minion can deduce it.
  std::optional<Seat> assassin_;
};

/// Adapts a NaivePolicy to the Agent contract. The policy is built from the
/// first observation, so one agent type serves every role.
class NaiveAgent : public Agent {
 public:
  explicit NaiveAgent(std::uint64_t seed) : seed_(seed) {}

  /// Optional talker for discussion slots. It follows the game like any
  /// agent, but only its speech is used; the policy ignores all talk.
  void set_speaker(std::unique_ptr<Agent> speaker) {
    speaker_ = std::move(speaker);
  }

  std::string kind() const override { return "naive"; }
  void start(const Observation& obs) override;
  Action decide(const Observation& obs) override;
  std::string speak(const Observation& obs) override;
  std::vector<double> probe_sides(const Observation& obs) override;
  void on_event(const GameEvent& event) override;
  void on_mission_result(const Observation& obs,
                         const MissionRecord& record) override;
  std::vector<event::AgentAnomaly> take_anomalies() override;

  const std::optional<NaivePolicy>& policy() const { return policy_; }

 private:
  void ensure_started(const Observation& obs);

  std::uint64_t seed_;
  std::optional<NaivePolicy> policy_;
  std::unique_ptr<Agent> speaker_;
};

}  // namespace avalon
