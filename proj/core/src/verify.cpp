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

#include "avalon/verify.hpp"

#include <algorithm>
#include <optional>

#include <fmt/format.h>

namespace avalon {
namespace {

class Recount {
 public:
  explicit Recount(const GameRecord& r) : r_(r), n_(r.config.num_players) {}

  VerifyReport run() {
    std::size_t i = 0;
    for (const GameEvent& e : r_.events) {
      ++i;
      index_ = i;
      std::visit([this](const auto& ev) { on(ev); }, e);
    }
    finish();
    return std::move(report_);
  }

 private:
  template <typename... Args>
  void problem(fmt::format_string<Args...> f, Args&&... args) {
    report_.ok = false;
    report_.problems.push_back(
        fmt::format("event {}: ", index_) +
        fmt::format(f, std::forward<Args>(args)...));
  }

  void after_end(const char* what) {
    if (ended_) problem("{} after the game ended", what);
  }

  void on(const event::GameStarted& e) {
    if (started_) problem("second game_started");
    started_ = true;
    if (e.num_players != n_) {
      problem("game_started names {} players, config has {}", e.num_players, n_);
    }
    leader_ = e.leader;
  }

  void on(const event::PhaseEntered&) { after_end("phase change"); }
  void on(const event::DiscussionOpened&) { after_end("discussion"); }
  void on(const event::Spoke&) { after_end("speech"); }
  void on(const event::DiscussionClosed&) {}
  void on(const event::AgentAnomaly&) {}
  void on(const event::SidesProbed& e) {
    if (static_cast<int>(e.good_probability.size()) != n_) {
      problem("probe from seat {} covers {} seats", e.seat,
              e.good_probability.size());
    }
  }

  void on(const event::TeamProposed& e) {
    after_end("proposal");
    if (awaiting_vote_ || on_quest_) problem("proposal while a team is pending");
    if (successes_ >= 3 || failures_ >= 3) problem("proposal after the missions were decided");
    if (e.mission != mission_) {
      problem("proposal for mission {}, expected {}", e.mission, mission_);
    }
    if (e.leader != leader_) {
      problem("proposal by seat {}, leader should be {}", e.leader, leader_);
    }
    const int needed = r_.config.mission_team_sizes.at(
        static_cast<std::size_t>(std::clamp(mission_, 0, kNumMissions - 1)));
    if (e.team.size() != needed) {
      problem("team of {} on mission {}, expected {}", e.team.size(), mission_,
              needed);
    }
    if (!e.team.subset_of(Team::everyone(n_))) problem("team names an unknown seat");
    if (e.attempt != rejections_ + 1) {
      problem("attempt {} after {} rejections", e.attempt, rejections_);
    }
    const bool should_force = rejections_ == r_.config.max_consecutive_rejections;
    if (e.forced != should_force) {
      problem("proposal forced={} with {} rejections", e.forced, rejections_);
    }
    team_ = e.team;
    if (e.forced) {
      on_quest_ = true;
    } else {
      awaiting_vote_ = true;
    }
  }

  void on(const event::TeamVoteRevealed& e) {
    after_end("team vote");
    if (!awaiting_vote_) {
      problem("team vote without a proposal");
      return;
    }
    awaiting_vote_ = false;
    if (static_cast<int>(e.votes.size()) != n_) {
      problem("{} team ballots for {} players", e.votes.size(), n_);
    }
    if (team_ && e.team != *team_) problem("vote on a different team than proposed");
    const auto approvals =
        std::count(e.votes.begin(), e.votes.end(), TeamVote::kApprove);
    const bool approved = 2 * approvals > n_;
    if (approved != e.approved) {
      problem("{} approvals of {} recorded as approved={}", approvals, n_,
              e.approved);
    }
    if (approved) {
      rejections_ = 0;
      on_quest_ = true;
    } else {
      ++rejections_;
      if (rejections_ > r_.config.max_consecutive_rejections) {
        problem("rejection {} exceeds the track", rejections_);
      }
      leader_ = (leader_ + 1) % n_;
      team_.reset();
    }
    if (e.consecutive_rejections != rejections_) {
      problem("rejection track {} recorded as {}", rejections_,
              e.consecutive_rejections);
    }
  }

  void on(const event::QuestResolved& e) {
    after_end("quest");
    if (!on_quest_) {
      problem("quest without an approved team");
      return;
    }
    on_quest_ = false;
    const MissionRecord& m = e.record;
    if (m.mission_index != mission_) {
      problem("quest for mission {}, expected {}", m.mission_index, mission_);
    }
    if (team_ && m.team != *team_) problem("quest team differs from the approved team");
    if (m.fail_votes < 0 || m.pass_votes < 0 ||
        m.fail_votes + m.pass_votes != m.team.size()) {
      problem("{} fail and {} pass votes from {} members", m.fail_votes,
              m.pass_votes, m.team.size());
    }
    const int threshold = r_.config.fails_required.at(
        static_cast<std::size_t>(std::clamp(mission_, 0, kNumMissions - 1)));
    const MissionOutcome outcome = m.fail_votes >= threshold
                                       ? MissionOutcome::kFailure
                                       : MissionOutcome::kSuccess;
    if (outcome != m.outcome) {
      problem("{} fails against a threshold of {} recorded as {}", m.fail_votes,
              threshold,
              m.outcome == MissionOutcome::kSuccess ? "success" : "failure");
    }
    if (outcome == MissionOutcome::kSuccess) {
      ++successes_;
    } else {
      ++failures_;
    }
    rejections_ = 0;
    team_.reset();
    leader_ = (leader_ + 1) % n_;
    if (successes_ < 3 && failures_ < 3) ++mission_;
  }

  void on(const event::AssassinationResolved& e) {
    after_end("assassination");
    if (successes_ < 3 || failures_ >= 3) problem("assassination before three successes");
    if (assassinated_) problem("second assassination");
    assassinated_ = e.target;
    if (e.target < 0 || e.target >= n_) problem("assassination of unknown seat");
    if (r_.roles && e.target >= 0 && e.target < n_ &&
        (*r_.roles)[static_cast<std::size_t>(e.target)] == Role::kAssassin) {
      problem("the Assassin targeted their own seat {}", e.target);
    }
  }

  void on(const event::GameEnded& e) {
    after_end("game_ended");
    ended_ = e.result;
  }

  std::optional<GameResult> expected_result() const {
    if (failures_ >= 3) return GameResult::kEvilWinByMissions;
    if (successes_ < 3 || !assassinated_ || !r_.roles) return std::nullopt;
    return (*r_.roles)[static_cast<std::size_t>(*assassinated_)] == Role::kMerlin
               ? GameResult::kEvilWinByAssassination
               : GameResult::kGoodWin;
  }

  void finish() {
    index_ = r_.events.size();
    if (!started_) problem("no game_started event");
    if (r_.aborted) return;
    if (!ended_) {
      problem("game never ended");
      return;
    }
    if (successes_ >= 3 && !assassinated_) problem("three successes but no assassination");
    if (ended_ == GameResult::kEvilWinByMissions && failures_ < 3) {
      problem("Evil mission win with {} failures", failures_);
    }
    if (ended_ != GameResult::kEvilWinByMissions && successes_ < 3) {
      problem("{} with {} successes", result_key(*ended_), successes_);
    }
    if (auto want = expected_result(); want && *want != *ended_) {
      problem("recount gives {}, log says {}", result_key(*want),
              result_key(*ended_));
    }
    if (r_.result != ended_) {
      problem("header result {} disagrees with the log",
              r_.result ? std::string(result_key(*r_.result)) : "null");
    }
  }

  const GameRecord& r_;
  int n_;
  std::size_t index_ = 0;
  VerifyReport report_;
  bool started_ = false;
  Seat leader_ = 0;
  int mission_ = 0;
  int rejections_ = 0;
  int successes_ = 0;
  int failures_ = 0;
  bool awaiting_vote_ = false;
  bool on_quest_ = false;
  std::optional<Team> team_;
  std::optional<Seat> assassinated_;
  std::optional<GameResult> ended_;
};

}  // namespace

VerifyReport verify_record(const GameRecord& record) {
  return Recount(record).run();
}

}  // namespace avalon
