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

#include "avalon/game.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "avalon/rng.hpp"

namespace avalon {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void reject(RuleCode code, const std::string& why) {
  throw RuleViolation(code, why);
}

Seat next_seat(Seat seat, int num_players) { return (seat + 1) % num_players; }

// The helpers below mutate a private working copy inside apply_action.

void open_discussion(GameState& s, std::vector<GameEvent>& events) {
  if (!s.config.discussion_enabled) return;
  DiscussionState d;
  d.order.push_back(s.leader);
  for (Seat i = 0; i < s.config.num_players; ++i) {
    if (i != s.leader) d.order.push_back(i);
  }
  d.order.push_back(s.leader);
  s.minutes.clear();
  events.push_back(event::DiscussionOpened{d.order});
  s.discussion = std::move(d);
}

void enter_phase(GameState& s, Phase phase, std::vector<GameEvent>& events) {
  s.phase = phase;
  events.push_back(event::PhaseEntered{phase, s.current_mission, s.leader});
  if (phase == Phase::kTeamVoting) {
    s.team_ballots.assign(s.config.num_players, std::nullopt);
  } else if (phase == Phase::kQuest) {
    s.quest_ballots.assign(s.config.num_players, std::nullopt);
  }
  if (phase == Phase::kTeamSelection || phase == Phase::kAssassination) {
    open_discussion(s, events);
  }
}

void finish(GameState& s, GameResult result, std::vector<GameEvent>& events) {
  s.phase = Phase::kTerminal;
  s.result = result;
  s.discussion.reset();
  events.push_back(event::GameEnded{result});
}

void check_seat(const GameState& s, Seat seat) {
  if (seat < 0 || seat >= s.config.num_players) {
    reject(RuleCode::kInvalidSeat, fmt::format("seat {} does not exist", seat));
  }
}

void apply_say(GameState& s, Seat seat, const Say& say,
               std::vector<GameEvent>& events) {
  if (!s.discussion) {
    reject(RuleCode::kNotYourSlot, "no discussion is running");
  }
  auto& d = *s.discussion;
  if (d.order.at(d.next_slot) != seat) {
    reject(RuleCode::kNotYourSlot,
           fmt::format("seat {} does not hold the speaking slot", seat));
  }
  bool truncated = false;
  std::string text =
      clip_sentences(say.text, s.config.discussion_sentence_limit, &truncated);
  s.minutes.push_back(Utterance{seat, text});
  events.push_back(event::Spoke{seat, std::move(text), truncated});
  if (++d.next_slot == d.order.size()) {
    s.discussion.reset();
    events.push_back(event::DiscussionClosed{});
  }
}

void start_quest(GameState& s, std::vector<GameEvent>& events) {
  s.consecutive_rejections = 0;
  enter_phase(s, Phase::kQuest, events);
}

void apply_propose(GameState& s, Seat seat, const ProposeTeam& p,
                   std::vector<GameEvent>& events) {
  if (s.phase != Phase::kTeamSelection) {
    reject(RuleCode::kWrongPhase, "teams are proposed in team selection");
  }
  if (seat != s.leader) {
    reject(RuleCode::kNotYourTurn,
           fmt::format("seat {} is not the leader", seat));
  }
  if (!p.team.subset_of(Team::everyone(s.config.num_players))) {
    reject(RuleCode::kInvalidSeat, "team names a seat outside the game");
  }
  const int needed = s.current_team_size();
  if (p.team.size() != needed) {
    reject(RuleCode::kIllegalTeamSize,
           fmt::format("mission {} needs {} players, got {}",
                       s.current_mission, needed, p.team.size()));
  }
  const bool forced =
      s.consecutive_rejections == s.config.max_consecutive_rejections;
  events.push_back(event::TeamProposed{s.current_mission, s.leader, p.team,
                                       s.consecutive_rejections + 1, forced});
  s.current_team = p.team;
  if (forced) {
    s.proposal_history.push_back(
        ProposalRecord{s.current_mission, s.leader, p.team, {}, true, true});
    start_quest(s, events);
  } else {
    enter_phase(s, Phase::kTeamVoting, events);
  }
}

void apply_team_vote(GameState& s, Seat seat, const VoteTeam& v,
                     std::vector<GameEvent>& events) {
  if (s.phase != Phase::kTeamVoting) {
    reject(RuleCode::kWrongPhase, "no team vote is open");
  }
  check_seat(s, seat);
  if (s.team_ballots[seat]) {
    reject(RuleCode::kDuplicateBallot,
           fmt::format("seat {} already voted on this team", seat));
  }
  s.team_ballots[seat] = v.vote;
  if (std::any_of(s.team_ballots.begin(), s.team_ballots.end(),
                  [](const auto& b) { return !b.has_value(); })) {
    return;
  }

  std::vector<std::pair<Seat, TeamVote>> ballots;
  std::vector<TeamVote> votes;
  for (Seat i = 0; i < s.config.num_players; ++i) {
    ballots.emplace_back(i, *s.team_ballots[i]);
    votes.push_back(*s.team_ballots[i]);
  }
  const bool approved = tally_team_vote(ballots, s.config.num_players) ==
                        TallyResult::kApproved;
  s.team_ballots.assign(s.config.num_players, std::nullopt);
  s.proposal_history.push_back(ProposalRecord{
      s.current_mission, s.leader, *s.current_team, votes, approved, false});
  if (approved) {
    events.push_back(event::TeamVoteRevealed{
        s.current_mission, *s.current_team, votes, true, 0});
    start_quest(s, events);
    return;
  }
  ++s.consecutive_rejections;
  events.push_back(event::TeamVoteRevealed{s.current_mission,
                                           *s.current_team, votes, false,
                                           s.consecutive_rejections});
  s.current_team.reset();
  s.leader = next_seat(s.leader, s.config.num_players);
  enter_phase(s, Phase::kTeamSelection, events);
}

void apply_quest_vote(GameState& s, Seat seat, const VoteQuest& v,
                      std::vector<GameEvent>& events) {
  if (s.phase != Phase::kQuest) {
    reject(RuleCode::kWrongPhase, "no quest is running");
  }
  check_seat(s, seat);
  const Team team = *s.current_team;
  if (!team.contains(seat)) {
    reject(RuleCode::kNotYourTurn,
           fmt::format("seat {} is not on the quest team", seat));
  }
  if (s.quest_ballots[seat]) {
    reject(RuleCode::kDuplicateBallot,
           fmt::format("seat {} already voted on this quest", seat));
  }
  s.quest_ballots[seat] = v.vote;
  std::vector<QuestVote> votes;
  for (Seat member : team.seats()) {
    if (!s.quest_ballots[member]) return;
    votes.push_back(*s.quest_ballots[member]);
  }
  // Only the multiset leaves this function.
  std::sort(votes.begin(), votes.end());
  MissionRecord rec =
      resolve_quest(team, votes, s.current_mission, s.config);
  s.quest_ballots.assign(s.config.num_players, std::nullopt);
  s.mission_ledger.push_back(rec);
  events.push_back(event::QuestResolved{rec});

  s.current_team.reset();
  s.consecutive_rejections = 0;
  s.leader = next_seat(s.leader, s.config.num_players);
  if (s.failures() >= 3) {
    finish(s, GameResult::kEvilWinByMissions, events);
  } else if (s.successes() >= 3) {
    enter_phase(s, Phase::kAssassination, events);
  } else {
    ++s.current_mission;
    enter_phase(s, Phase::kTeamSelection, events);
  }
}

void apply_assassinate(GameState& s, Seat seat, const Assassinate& a,
                       std::vector<GameEvent>& events) {
  if (s.phase != Phase::kAssassination) {
    reject(RuleCode::kWrongPhase, "assassination has not begun");
  }
  if (seat != s.seat_of(Role::kAssassin)) {
    reject(RuleCode::kNotYourTurn, "only the Assassin may assassinate");
  }
  if (a.target < 0 || a.target >= s.config.num_players || a.target == seat) {
    reject(RuleCode::kIllegalTarget,
           fmt::format("seat {} cannot be targeted", a.target));
  }
  s.assassination_target = a.target;
  events.push_back(event::AssassinationResolved{a.target});
  finish(s,
         s.roles[a.target] == Role::kMerlin
             ? GameResult::kEvilWinByAssassination
             : GameResult::kGoodWin,
         events);
}

}  // namespace

std::string_view phase_key(Phase phase) {
  switch (phase) {
    case Phase::kTeamSelection: return "team_selection";
    case Phase::kTeamVoting: return "team_voting";
    case Phase::kQuest: return "quest";
    case Phase::kAssassination: return "assassination";
    case Phase::kTerminal: return "terminal";
  }
  return "?";
}

std::optional<Phase> parse_phase_key(std::string_view key) {
  for (Phase p : {Phase::kTeamSelection, Phase::kTeamVoting, Phase::kQuest,
                  Phase::kAssassination, Phase::kTerminal}) {
    if (phase_key(p) == key) return p;
  }
  return std::nullopt;
}

std::string_view result_key(GameResult result) {
  switch (result) {
    case GameResult::kGoodWin: return "good_win";
    case GameResult::kEvilWinByMissions: return "evil_win_missions";
    case GameResult::kEvilWinByAssassination: return "evil_win_assassination";
  }
  return "?";
}

std::optional<GameResult> parse_result_key(std::string_view key) {
  for (GameResult r : {GameResult::kGoodWin, GameResult::kEvilWinByMissions,
                       GameResult::kEvilWinByAssassination}) {
    if (result_key(r) == key) return r;
  }
  return std::nullopt;
}

std::string_view rule_code_key(RuleCode code) {
  switch (code) {
    case RuleCode::kGameOver: return "game_over";
    case RuleCode::kWrongPhase: return "wrong_phase";
    case RuleCode::kNotYourTurn: return "not_your_turn";
    case RuleCode::kInvalidSeat: return "invalid_seat";
    case RuleCode::kIllegalTeamSize: return "illegal_team_size";
    case RuleCode::kDuplicateBallot: return "duplicate_ballot";
    case RuleCode::kIllegalTarget: return "illegal_target";
    case RuleCode::kNotYourSlot: return "not_your_slot";
    case RuleCode::kDiscussionActive: return "discussion_active";
  }
  return "?";
}

std::string describe(const Action& action) {
  return std::visit(
      Overloaded{
          [](const ProposeTeam& a) { return "propose " + a.team.to_string(); },
          [](const VoteTeam& a) {
            return std::string(a.vote == TeamVote::kApprove ? "approve"
                                                            : "reject");
          },
          [](const VoteQuest& a) {
            return std::string(a.vote == QuestVote::kPass ? "pass" : "fail");
          },
          [](const Assassinate& a) {
            return fmt::format("assassinate {}", a.target);
          },
          [](const Say& a) { return "say \"" + a.text + "\""; },
      },
      action);
}

Seat GameState::seat_of(Role role) const {
  const auto it = std::find(roles.begin(), roles.end(), role);
  return it == roles.end() ? -1 : static_cast<Seat>(it - roles.begin());
}

int GameState::successes() const {
  return static_cast<int>(
      std::count_if(mission_ledger.begin(), mission_ledger.end(),
                    [](const MissionRecord& m) {
                      return m.outcome == MissionOutcome::kSuccess;
                    }));
}

int GameState::failures() const {
  return static_cast<int>(mission_ledger.size()) - successes();
}

std::optional<Seat> GameState::current_speaker() const {
  if (!discussion) return std::nullopt;
  return discussion->order.at(discussion->next_slot);
}

int GameState::current_team_size() const {
  return config.mission_team_sizes.at(current_mission);
}

std::vector<Role> draw_roles(const GameConfig& config, std::uint64_t seed) {
  std::vector<Role> roles = config.roles;
  std::sort(roles.begin(), roles.end());
  auto rng = Pcg32::from_seed(stream_seed(seed, 0, StreamPurpose::kRoles));
  rng.shuffle(std::span<Role>(roles));
  return roles;
}

Transition new_game(const GameConfig& config, std::uint64_t seed,
                    const std::optional<std::vector<Role>>& fixed_roles) {
  config.validate();
  Transition t;
  GameState& s = t.state;
  s.config = config;
  s.seed = seed;
  if (fixed_roles) {
    auto want = config.roles;
    auto got = *fixed_roles;
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    if (want != got) {
      throw ConfigError("fixed roles do not match the configured role set");
    }
    s.roles = *fixed_roles;
  } else {
    s.roles = draw_roles(config, seed);
  }
  s.leader = 0;
  s.team_ballots.assign(config.num_players, std::nullopt);
  s.quest_ballots.assign(config.num_players, std::nullopt);
  t.events.push_back(event::GameStarted{config.num_players, s.leader});
  enter_phase(s, Phase::kTeamSelection, t.events);
  return t;
}

std::vector<Action> legal_actions(const GameState& s, Seat seat) {
  std::vector<Action> out;
  if (s.terminal() || seat < 0 || seat >= s.config.num_players) return out;
  if (s.discussion) {
    if (s.current_speaker() == seat) out.emplace_back(Say{});
    return out;
  }
  switch (s.phase) {
    case Phase::kTeamSelection:
      if (seat == s.leader) {
        for (Team t : all_teams(s.config.num_players, s.current_team_size())) {
          out.emplace_back(ProposeTeam{t});
        }
      }
      break;
    case Phase::kTeamVoting:
      if (!s.team_ballots[seat]) {
        out.emplace_back(VoteTeam{TeamVote::kApprove});
        out.emplace_back(VoteTeam{TeamVote::kReject});
      }
      break;
    case Phase::kQuest:
      if (s.current_team->contains(seat) && !s.quest_ballots[seat]) {
        out.emplace_back(VoteQuest{QuestVote::kPass});
        out.emplace_back(VoteQuest{QuestVote::kFail});
      }
      break;
    case Phase::kAssassination:
      if (seat == s.seat_of(Role::kAssassin)) {
        for (Seat t = 0; t < s.config.num_players; ++t) {
          if (t != seat) out.emplace_back(Assassinate{t});
        }
      }
      break;
    case Phase::kTerminal:
      break;
  }
  return out;
}

std::vector<Seat> awaiting_seats(const GameState& s) {
  std::vector<Seat> out;
  if (s.terminal()) return out;
  if (s.discussion) {
    out.push_back(*s.current_speaker());
    return out;
  }
  switch (s.phase) {
    case Phase::kTeamSelection:
      out.push_back(s.leader);
      break;
    case Phase::kTeamVoting:
      for (Seat i = 0; i < s.config.num_players; ++i) {
        if (!s.team_ballots[i]) out.push_back(i);
      }
      break;
    case Phase::kQuest:
      for (Seat i : s.current_team->seats()) {
        if (!s.quest_ballots[i]) out.push_back(i);
      }
      break;
    case Phase::kAssassination:
      out.push_back(s.seat_of(Role::kAssassin));
      break;
    case Phase::kTerminal:
      break;
  }
  return out;
}

TallyResult tally_team_vote(std::span<const std::pair<Seat, TeamVote>> ballots,
                            int num_players) {
  std::vector<bool> seen(num_players, false);
  int approvals = 0;
  for (const auto& [seat, vote] : ballots) {
    if (seat < 0 || seat >= num_players) {
      throw ProtocolError(fmt::format("ballot from unknown seat {}", seat));
    }
    if (seen[seat]) {
      throw ProtocolError(fmt::format("duplicate ballot from seat {}", seat));
    }
    seen[seat] = true;
    if (vote == TeamVote::kApprove) ++approvals;
  }
  if (static_cast<int>(ballots.size()) != num_players) {
    throw ProtocolError(fmt::format("expected {} ballots, got {}", num_players,
                                    ballots.size()));
  }
  return 2 * approvals > num_players ? TallyResult::kApproved
                                     : TallyResult::kRejected;
}

MissionRecord resolve_quest(Team team, std::span<const QuestVote> votes,
                            int mission_index, const GameConfig& config) {
  if (mission_index < 0 || mission_index >= kNumMissions) {
    throw ProtocolError(fmt::format("mission index {} out of range",
                                    mission_index));
  }
  if (static_cast<int>(votes.size()) != team.size()) {
    throw ProtocolError(fmt::format("team of {} cast {} quest votes",
                                    team.size(), votes.size()));
  }
  MissionRecord rec;
  rec.mission_index = mission_index;
  rec.team = team;
  rec.fail_votes = static_cast<int>(
      std::count(votes.begin(), votes.end(), QuestVote::kFail));
  rec.pass_votes = static_cast<int>(votes.size()) - rec.fail_votes;
  rec.outcome = rec.fail_votes >= config.fails_required[mission_index]
                    ? MissionOutcome::kFailure
                    : MissionOutcome::kSuccess;
  return rec;
}

Transition apply_action(const GameState& state, Seat seat,
                        const Action& action) {
  if (state.terminal()) reject(RuleCode::kGameOver, "the game is over");
  check_seat(state, seat);
  Transition t{state, {}};
  GameState& s = t.state;
  if (s.discussion && !std::holds_alternative<Say>(action)) {
    reject(RuleCode::kDiscussionActive,
           "only speech is allowed while discussion is running");
  }
  std::visit(
      Overloaded{
          [&](const Say& a) { apply_say(s, seat, a, t.events); },
          [&](const ProposeTeam& a) { apply_propose(s, seat, a, t.events); },
          [&](const VoteTeam& a) { apply_team_vote(s, seat, a, t.events); },
          [&](const VoteQuest& a) { apply_quest_vote(s, seat, a, t.events); },
          [&](const Assassinate& a) {
            apply_assassinate(s, seat, a, t.events);
          },
      },
      action);
  return t;
}

Transition apply_batch(const GameState& state,
                       std::span<const std::pair<Seat, Action>> actions) {
  Transition t{state, {}};
  for (const auto& [seat, action] : actions) {
    auto step = apply_action(t.state, seat, action);
    t.state = std::move(step.state);
    t.events.insert(t.events.end(),
                    std::make_move_iterator(step.events.begin()),
                    std::make_move_iterator(step.events.end()));
  }
  return t;
}

std::string clip_sentences(std::string_view text, int limit, bool* truncated) {
  if (truncated) *truncated = false;
  if (limit <= 0) return std::string(text);
  int count = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '.' || c == '!' || c == '?') {
      std::size_t end = i + 1;
      // Absorb runs like "?!" or "..." and closing quotes/brackets.
      while (end < text.size() &&
             (text[end] == '.' || text[end] == '!' || text[end] == '?' ||
              text[end] == '"' || text[end] == '\'' || text[end] == ')')) {
        ++end;
      }
      if (end == text.size() ||
          std::isspace(static_cast<unsigned char>(text[end]))) {
        if (++count == limit) {
          std::string_view rest = text.substr(end);
          const bool more =
              rest.find_first_not_of(" \t\r\n") != std::string_view::npos;
          if (truncated) *truncated = more;
          return std::string(text.substr(0, end));
        }
      }
      i = end;
      continue;
    }
    ++i;
  }
  return std::string(text);
}

}  // namespace avalon
