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


#include <bit>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "avalon/beliefs.hpp"
#include "belief_oracle.hpp"

namespace avalon {
namespace {

using testing_oracle::BruteForce;

const Probability kHalf(1, 2);
const Probability kOne(1);
const Probability kZero(0);

BeliefState servant3() {
  return init_beliefs(5, 2, {{3, Side::kGood}}, 3);
}

TEST(InitBeliefs, ServantSeesSixEqualWorlds) {
  const auto b = servant3();
  EXPECT_EQ(b.possibilities.size(), 6u);
  EXPECT_EQ(b.surviving(), 6u);
  for (const auto& w : b.weights) EXPECT_EQ(w, Probability(1, 6));
}

TEST(InitBeliefs, FullKnowledgeLeavesOneWorld) {
  std::map<Seat, Side> all{{0, Side::kGood}, {1, Side::kEvil}, {2, Side::kGood},
                           {3, Side::kGood}, {4, Side::kEvil}};
  const auto b = init_beliefs(5, 2, all);
  EXPECT_EQ(b.surviving(), 1u);
  EXPECT_EQ(b.weights.front(), kOne);
  EXPECT_EQ(b.possibilities.front().evil, Team({1, 4}));
}

TEST(InitBeliefs, NoKnowledgeEnumeratesAllPairs) {
  EXPECT_EQ(init_beliefs(5, 2, {}).possibilities.size(), 10u);
  EXPECT_EQ(init_beliefs(10, 4, {}).possibilities.size(), 210u);
}

TEST(InitBeliefs, ContradictionsThrow) {
  std::map<Seat, Side> three_evil{
      {0, Side::kEvil}, {1, Side::kEvil}, {2, Side::kEvil}};
  EXPECT_THROW(init_beliefs(5, 2, three_evil), std::invalid_argument);
  std::map<Seat, Side> four_good{{0, Side::kGood}, {1, Side::kGood},
                                 {2, Side::kGood}, {3, Side::kGood}};
  EXPECT_THROW(init_beliefs(5, 2, four_good), std::invalid_argument);
}

TEST(UpdateOnQuest, OneFailRulesOutTheCleanWorld) {
  const auto b = update_on_quest(servant3(), Team{1, 2}, 1);
  EXPECT_EQ(b.surviving(), 5u);
  for (std::size_t i = 0; i < b.possibilities.size(); ++i) {
    if (b.possibilities[i].evil == Team({0, 4})) {
      EXPECT_EQ(b.weights[i].numerator(), 0);
    } else {
      EXPECT_EQ(b.weights[i], Probability(1, 5));
    }
  }
}

TEST(UpdateOnQuest, ZeroFailsChangesNothing) {
  const auto b = servant3();
  EXPECT_EQ(update_on_quest(b, Team{1, 2}, 0), b);
}

TEST(UpdateOnQuest, TwoFailsPinBothMembers) {
  const auto b = update_on_quest(servant3(), Team{0, 4}, 2);
  EXPECT_EQ(b.surviving(), 1u);
  for (std::size_t i = 0; i < b.possibilities.size(); ++i) {
    if (b.weights[i].numerator() != 0) {
      EXPECT_EQ(b.possibilities[i].evil, Team({0, 4}));
      EXPECT_EQ(b.weights[i], kOne);
    }
  }
}

TEST(UpdateOnQuest, ImpossibleFailsRaise) {
  // Seat 3 is the owner and known Good: a solo quest by seat 3 cannot fail.
  const auto b = servant3();
  EXPECT_THROW(update_on_quest(b, Team{3}, 1), BeliefInconsistency);
  EXPECT_THROW(update_on_quest(b, Team{0, 1, 2}, 3), BeliefInconsistency);
}

TEST(TeamPreference, WorkedExamples) {
  const auto b = servant3();
  EXPECT_EQ(team_preference(b, Team{3, 1}, std::nullopt).x, kHalf);
  EXPECT_EQ(team_preference(b, Team{1, 2}, std::nullopt).x, Probability(1, 6));
  EXPECT_EQ(team_preference(b, Team{3, 0}, Team{0, 2, 3}).y, 1);
  EXPECT_EQ(team_preference(b, Team{3, 0, 2, 4}, Team{0, 2, 3}).y, 1);
  EXPECT_EQ(team_preference(b, Team{3, 1}, Team{0, 2, 3}).y, 0);
  EXPECT_EQ(team_preference(b, Team{3, 1}, std::nullopt).y, 0);
}

TEST(BestTeams, FreshServantPrefersItself) {
  const auto best = best_teams(servant3(), 2, std::nullopt);
  const std::vector<Team> want{Team{0, 3}, Team{1, 3}, Team{2, 3}, Team{3, 4}};
  EXPECT_EQ(best, want);
}

TEST(BestTeams, AfterAFailEveryTrioWithSelfButTheSuspects) {
  const auto b = update_on_quest(servant3(), Team{1, 2}, 1);
  const auto best = best_teams(b, 3, std::nullopt);
  std::vector<Team> want;
  for (Team t : all_teams(5, 3)) {
    if (t.contains(3) && t != Team({1, 2, 3})) want.push_back(t);
  }
  EXPECT_EQ(best, want);
}

TEST(BestTeams, CertaintyLeavesTheCleanPairs) {
  std::map<Seat, Side> all{{0, Side::kGood}, {1, Side::kEvil}, {2, Side::kGood},
                           {3, Side::kGood}, {4, Side::kEvil}};
  const auto best = best_teams(init_beliefs(5, 2, all), 2, std::nullopt);
  EXPECT_EQ(best, (std::vector<Team>{Team{0, 2}, Team{0, 3}, Team{2, 3}}));
}

TEST(BestTeams, LastSuccessBreaksTies) {
  const auto best = best_teams(servant3(), 2, Team{0, 2, 3});
  EXPECT_EQ(best, (std::vector<Team>{Team{0, 3}, Team{2, 3}}));
}

TEST(Posterior, WorkedExamples) {
  const auto b = servant3();
  EXPECT_DOUBLE_EQ(posterior_good(b, 3), 1.0);
  EXPECT_DOUBLE_EQ(posterior_good(b, 1), 0.5);
  const auto pinned = update_on_quest(b, Team{0, 4}, 2);
  EXPECT_DOUBLE_EQ(posterior_good(pinned, 0), 0.0);
  EXPECT_EQ(posterior_good_exact(pinned, 1), kOne);
}

TEST(Posterior, SumsToTheGoodCount) {
  auto b = update_on_quest(init_beliefs(7, 3, {{2, Side::kGood}}, 2),
                           Team{0, 1, 4}, 1);
  Probability total(0);
  for (Seat s = 0; s < 7; ++s) total += posterior_good_exact(b, s);
  EXPECT_EQ(total, Probability(4));
}

// Exact agreement with an independent enumeration over a family of
// observation histories.
TEST(Oracle, PreferenceMatchesBruteForceExactly) {
  const std::vector<std::pair<Team, int>> history{
      {Team{0, 1}, 1}, {Team{1, 2, 4}, 1}, {Team{0, 2}, 0}};
  for (Seat owner = 0; owner < 5; ++owner) {
    BruteForce oracle(5, 2, {{owner, Side::kGood}});
    BeliefState b = init_beliefs(5, 2, {{owner, Side::kGood}}, owner);
    for (const auto& [team, fails] : history) {
      if (!oracle.consistent_after(team, fails)) break;
      oracle.observe(team, fails);
      b = update_on_quest(b, team, fails);
      for (int size = 1; size <= 4; ++size) {
        for (Team t : all_teams(5, size)) {
          ASSERT_EQ(team_preference(b, t, std::nullopt).x, oracle.clean(t))
              << "owner " << owner << " team " << t.to_string();
        }
      }
      for (Seat s = 0; s < 5; ++s) {
        ASSERT_EQ(posterior_good_exact(b, s), oracle.good(s));
      }
    }
  }
}

TEST(Oracle, MaxCleanProbabilityIsTheMaximumOverTeams) {
  const auto b = update_on_quest(servant3(), Team{1, 2}, 1);
  for (int size = 1; size <= 4; ++size) {
    Probability best(0);
    for (Team t : all_teams(5, size)) {
      best = std::max(best, team_preference(b, t, std::nullopt).x);
    }
    EXPECT_EQ(max_clean_probability(b, size), best);
  }
}

TEST(Properties, MoreFailsNeverRaiseCleanProbability) {
  // Observing a fail on a team can only lower the chance that a subset of
  // that team is all Good.
  const auto b0 = init_beliefs(6, 2, {{5, Side::kGood}}, 5);
  const Team quest{0, 1, 2};
  const auto b1 = update_on_quest(b0, quest, 1);
  for (Team sub : all_teams(6, 2)) {
    if (!sub.subset_of(quest)) continue;
    EXPECT_LE(team_preference(b1, sub, std::nullopt).x,
              team_preference(b0, sub, std::nullopt).x);
  }
}

TEST(Properties, SurvivingWeightsAlwaysSumToOne) {
  auto b = init_beliefs(8, 3, {{0, Side::kGood}}, 0);
  const std::vector<std::pair<Team, int>> obs{
      {Team{1, 2, 3}, 1}, {Team{2, 4, 5, 6}, 2}, {Team{1, 7}, 0}};
  for (const auto& [t, f] : obs) {
    b = update_on_quest(b, t, f);
    Probability sum(0);
    for (const auto& w : b.weights) sum += w;
    EXPECT_EQ(sum, kOne);
  }
}

TEST(Properties, SymmetricSeatsGetEqualPosteriors) {
  // Seats 1 and 2 appear together on every observation, so nothing
  // distinguishes them.
  auto b = init_beliefs(6, 2, {{0, Side::kGood}}, 0);
  b = update_on_quest(b, Team{1, 2, 3}, 1);
  b = update_on_quest(b, Team{0, 1, 2}, 0);
  EXPECT_EQ(posterior_good_exact(b, 1), posterior_good_exact(b, 2));
  EXPECT_EQ(posterior_good_exact(b, 4), posterior_good_exact(b, 5));
}

TEST(Properties, UpdateOrderDoesNotMatter) {
  const auto b = init_beliefs(6, 2, {{5, Side::kGood}}, 5);
  const auto ab = update_on_quest(update_on_quest(b, Team{0, 1}, 1), Team{1, 2, 3}, 1);
  const auto ba = update_on_quest(update_on_quest(b, Team{1, 2, 3}, 1), Team{0, 1}, 1);
  EXPECT_EQ(ab.weights, ba.weights);
}

}  // namespace
}  // namespace avalon
