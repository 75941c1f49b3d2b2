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


#include <gtest/gtest.h>

#include "avalon/llm_parse.hpp"
#include "fixture_cases.hpp"

namespace avalon {
namespace {

ParseContext ctx(Phase phase, int team_size = 0, Seat seat = 0, int n = 5) {
  return ParseContext{phase, n, team_size, seat};
}

TEST(ParseFixtures, EveryTranscriptParsesAsStated) {
  const auto results = fixtures::run_parse_cases();
  EXPECT_GE(results.size(), 18u);
  for (const auto& r : results) EXPECT_FALSE(r.error) << r.name << ": " << *r.error;
}

TEST(AnswerLine, ValidatesShape) {
  EXPECT_EQ(parse_answer_line("Answer: [1, 3]", ctx(Phase::kTeamSelection, 2)),
            Action(ProposeTeam{Team{1, 3}}));
  EXPECT_FALSE(parse_answer_line("Answer: [1, 3, 4]", ctx(Phase::kTeamSelection, 2)));
  EXPECT_FALSE(parse_answer_line("Answer: [1, 9]", ctx(Phase::kTeamSelection, 2)));
  EXPECT_FALSE(parse_answer_line("Answer: [1, 1]", ctx(Phase::kTeamSelection, 2)));
  EXPECT_EQ(parse_answer_line("answer: yes", ctx(Phase::kTeamVoting)),
            Action(VoteTeam{TeamVote::kApprove}));
  EXPECT_EQ(parse_answer_line("Answer: Yes", ctx(Phase::kQuest)),
            Action(VoteQuest{QuestVote::kPass}));
  EXPECT_FALSE(parse_answer_line("Answer: Maybe", ctx(Phase::kTeamVoting)));
  EXPECT_EQ(parse_answer_line("Answer: 2", ctx(Phase::kAssassination, 0, 0)),
            Action(Assassinate{2}));
  EXPECT_FALSE(parse_answer_line("Answer: [0]", ctx(Phase::kAssassination, 0, 0)));
  EXPECT_FALSE(parse_answer_line("no template here", ctx(Phase::kTeamVoting)));
}

TEST(AnswerLine, LastAnswerWins) {
  EXPECT_EQ(parse_answer_line("Answer: {Yes|No}\nAnswer: No", ctx(Phase::kTeamVoting)),
            Action(VoteTeam{TeamVote::kReject}));
}

TEST(Fallback, CommonPhrasings) {
  EXPECT_EQ(fallback_parse("I approve this team.", ctx(Phase::kTeamVoting)),
            Action(VoteTeam{TeamVote::kApprove}));
  EXPECT_EQ(fallback_parse("I will not approve this team.", ctx(Phase::kTeamVoting)),
            Action(VoteTeam{TeamVote::kReject}));
  EXPECT_EQ(fallback_parse("I will help the mission succeed.", ctx(Phase::kQuest)),
            Action(VoteQuest{QuestVote::kPass}));
  EXPECT_EQ(fallback_parse("I will sabotage it and vote fail.", ctx(Phase::kQuest)),
            Action(VoteQuest{QuestVote::kFail}));
  EXPECT_EQ(fallback_parse("I propose myself and Player 4.",
                           ctx(Phase::kTeamSelection, 2, 1)),
            Action(ProposeTeam{Team{1, 4}}));
  EXPECT_FALSE(fallback_parse("Hmm.", ctx(Phase::kTeamVoting)));
}

TEST(Probe, MissingSeatsAndRangeClamping) {
  const auto p = parse_probe_answer("Answer: {0: 1.2, 2: -0.5, 4: 0.25}", 5);
  ASSERT_TRUE(p);
  EXPECT_EQ(*p, (std::vector<double>{1.0, 0.5, 0.0, 0.5, 0.25}));
  EXPECT_FALSE(parse_probe_answer("I have no idea.", 5));
  const auto f = fallback_probe("Player 1: 0.2\nPlayer 3: 0.9", 5);
  ASSERT_TRUE(f);
  EXPECT_EQ(*f, (std::vector<double>{0.5, 0.2, 0.5, 0.9, 0.5}));
}

TEST(Sentences, SplitOnEndsAndLines) {
  EXPECT_EQ(split_sentences("One. Two!\nThree?"),
            (std::vector<std::string>{"One.", "Two!", "Three?"}));
}

}  // namespace
}  // namespace avalon
