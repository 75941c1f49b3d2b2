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

// Pure rules engine. Every operation maps a GameState value to a new value
// plus the public events it produced; nothing is mutated in place and no
// function keeps hidden state.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "avalon/config.hpp"
#include "avalon/team.hpp"

namespace avalon {

enum class Phase {
  kTeamSelection,
  kTeamVoting,
  kQuest,
  kAssassination,
  kTerminal,
};

enum class TeamVote { kApprove, kReject };
enum class QuestVote { kPass, kFail };
enum class MissionOutcome { kSuccess, kFailure };
enum class GameResult { kGoodWin, kEvilWinByMissions, kEvilWinByAssassination };
enum class TallyResult { kApproved, kRejected };

std::string_view phase_key(Phase phase);
std::string_view result_key(GameResult result);
std::optional<Phase> parse_phase_key(std::string_view key);
std::optional<GameResult> parse_result_key(std::string_view key);

// --- Actions ---------------------------------------------------------------

struct ProposeTeam {
  Team team;
  bool operator==(const ProposeTeam&) const = default;
};
struct VoteTeam {
  TeamVote vote;
  bool operator==(const VoteTeam&) const = default;
};
struct VoteQuest {
  QuestVote vote;
  bool operator==(const VoteQuest&) const = default;
};
struct Assassinate {
  Seat target;
  bool operator==(const Assassinate&) const = default;
};
struct Say {
  std::string text;
  bool operator==(const Say&) const = default;
};

using Action = std::variant<ProposeTeam, VoteTeam, VoteQuest, Assassinate, Say>;

std::string describe(const Action& action);

// --- Records ---------------------------------------------------------------

struct Utterance {
  Seat seat = 0;
  std::string text;
  bool operator==(const Utterance&) const = default;
};

struct ProposalRecord {
  int mission = 0;
  Seat leader = 0;
  Team team;
  /// Per-seat public votes; empty for a forced proposal.
  std::vector<TeamVote> votes;
  bool approved = false;
  bool forced = false;
  bool operator==(const ProposalRecord&) const = default;
};

/// Counts only; quest voter identities are never stored.
struct MissionRecord {
  int mission_index = 0;
  Team team;
  int fail_votes = 0;
  int pass_votes = 0;
  MissionOutcome outcome = MissionOutcome::kSuccess;
  bool operator==(const MissionRecord&) const = default;
};

// --- Events ----------------------------------------------------------------
// Events carry exactly the public consequences of an action.

namespace event {

struct GameStarted {
  int num_players = 0;
  Seat leader = 0;
  bool operator==(const GameStarted&) const = default;
};
struct PhaseEntered {
  Phase phase = Phase::kTeamSelection;
  int mission = 0;
  Seat leader = 0;
  bool operator==(const PhaseEntered&) const = default;
};
struct DiscussionOpened {
  std::vector<Seat> order;
  bool operator==(const DiscussionOpened&) const = default;
};
struct Spoke {
  Seat seat = 0;
  std::string text;
  bool truncated = false;
  bool operator==(const Spoke&) const = default;
};
struct DiscussionClosed {
  bool operator==(const DiscussionClosed&) const = default;
};
struct TeamProposed {
  int mission = 0;
  Seat leader = 0;
  Team team;
  /// 1-based proposal number within the mission.
  int attempt = 1;
  /// True for the fifth proposal, which skips voting.
  bool forced = false;
  bool operator==(const TeamProposed&) const = default;
};
struct TeamVoteRevealed {
  int mission = 0;
  Team team;
  std::vector<TeamVote> votes;
  bool approved = false;
  int consecutive_rejections = 0;
  bool operator==(const TeamVoteRevealed&) const = default;
};
struct QuestResolved {
  MissionRecord record;
  bool operator==(const QuestResolved&) const = default;
};
struct AssassinationResolved {
  Seat target = 0;
  bool operator==(const AssassinationResolved&) const = default;
};
struct GameEnded {
  GameResult result = GameResult::kGoodWin;
  bool operator==(const GameEnded&) const = default;
};

// Orchestration-level entries that share the event log.
struct AgentAnomaly {
  Seat seat = 0;
  std::string kind;
  std::string detail;
  bool operator==(const AgentAnomaly&) const = default;
};
struct SidesProbed {
  Seat seat = 0;
  std::vector<double> good_probability;
  bool operator==(const SidesProbed&) const = default;
};

}  // namespace event

using GameEvent =
    std::variant<event::GameStarted, event::PhaseEntered,
                 event::DiscussionOpened, event::Spoke,
                 event::DiscussionClosed, event::TeamProposed,
                 event::TeamVoteRevealed, event::QuestResolved,
                 event::AssassinationResolved, event::GameEnded,
                 event::AgentAnomaly, event::SidesProbed>;

// --- Errors ----------------------------------------------------------------

enum class RuleCode {
  kGameOver,
  kWrongPhase,
  kNotYourTurn,
  kInvalidSeat,
  kIllegalTeamSize,
  kDuplicateBallot,
  kIllegalTarget,
  kNotYourSlot,
  kDiscussionActive,
};

/// Machine-readable code, e.g. "illegal_team_size".
std::string_view rule_code_key(RuleCode code);

/// An action was rejected; the input state is untouched.
class RuleViolation : public std::runtime_error {
 public:
  RuleViolation(RuleCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  RuleCode code() const { return code_; }

 private:
  RuleCode code_;
};

/// Malformed batch input (missing or duplicate ballots, count mismatch).
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- State -----------------------------------------------------------------

struct DiscussionState {
  std::vector<Seat> order;
  std::size_t next_slot = 0;
  bool operator==(const DiscussionState&) const = default;
};

struct GameState {
  GameConfig config;
  std::uint64_t seed = 0;
  /// Secret seat -> role map.
  std::vector<Role> roles;
  Phase phase = Phase::kTeamSelection;
  int current_mission = 0;
  Seat leader = 0;
  int consecutive_rejections = 0;
  /// Team under vote or on the quest.
  std::optional<Team> current_team;
  std::vector<ProposalRecord> proposal_history;
  std::vector<MissionRecord> mission_ledger;
  /// Active discussion round, if any. While set, only Say is legal.
  std::optional<DiscussionState> discussion;
  /// Transcript of the most recent discussion round.
  std::vector<Utterance> minutes;
  /// Sealed ballots, revealed all at once when the last one arrives.
  std::vector<std::optional<TeamVote>> team_ballots;
  std::vector<std::optional<QuestVote>> quest_ballots;
  std::optional<Seat> assassination_target;
  std::optional<GameResult> result;

  Side side(Seat seat) const { return side_of(roles.at(seat)); }
  Seat seat_of(Role role) const;
  int successes() const;
  int failures() const;
  bool terminal() const { return phase == Phase::kTerminal; }
  bool discussing() const { return discussion.has_value(); }
  /// Seat whose speaking slot is open, if a discussion is running.
  std::optional<Seat> current_speaker() const;
  int current_team_size() const;

  bool operator==(const GameState&) const = default;
};

struct Transition {
  GameState state;
  std::vector<GameEvent> events;
};

/// Starts a game. Roles are drawn with a seeded shuffle unless `fixed_roles`
/// is given. Throws ConfigError.
Transition new_game(const GameConfig& config, std::uint64_t seed,
                    const std::optional<std::vector<Role>>& fixed_roles = {});

/// Seeded role assignment used by new_game.
std::vector<Role> draw_roles(const GameConfig& config, std::uint64_t seed);

/// Every action `seat` may take now. Proposals are enumerated in full; Say is
/// returned with empty text as a template.
std::vector<Action> legal_actions(const GameState& state, Seat seat);

/// Seats that still owe an action in the current step.
std::vector<Seat> awaiting_seats(const GameState& state);

/// Strict majority. Throws ProtocolError on missing or duplicate ballots.
TallyResult tally_team_vote(std::span<const std::pair<Seat, TeamVote>> ballots,
                            int num_players);

/// Throws ProtocolError if the vote count differs from the team size.
MissionRecord resolve_quest(Team team, std::span<const QuestVote> votes,
                            int mission_index, const GameConfig& config);

/// Throws RuleViolation; `state` is never modified.
Transition apply_action(const GameState& state, Seat seat,
                        const Action& action);

/// Applies a batch of simultaneous ballots (or any action sequence) in order.
Transition apply_batch(const GameState& state,
                       std::span<const std::pair<Seat, Action>> actions);

/// Clips `text` to at most `limit` sentences (0 = no limit).
std::string clip_sentences(std::string_view text, int limit,
                           bool* truncated = nullptr);

}  // namespace avalon
