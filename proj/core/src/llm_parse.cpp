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

#include "avalon/llm_parse.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <string>

namespace avalon {
namespace {

constexpr auto kIcase = std::regex::ECMAScript | std::regex::icase;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::vector<int> integers_in(const std::string& s) {
  static const std::regex kInt(R"(\d+)");
  std::vector<int> out;
  for (std::sregex_iterator it(s.begin(), s.end(), kInt), end; it != end; ++it) {
    out.push_back(std::stoi(it->str()));
  }
  return out;
}

std::optional<Team> make_team(const std::vector<int>& ids,
                              const ParseContext& ctx) {
  Team t;
  for (int id : ids) {
    if (id < 0 || id >= ctx.num_players) return std::nullopt;
    t = t.with(id);
  }
  return t;
}

bool valid_target(int id, const ParseContext& ctx) {
  return id >= 0 && id < ctx.num_players && id != ctx.seat;
}

// Seats named in one sentence: "[1, 3]", "Player 1 and Player 3",
// "players 1, 3, and 4".
std::optional<Team> team_in_sentence(const std::string& sentence,
                                     const ParseContext& ctx) {
  static const std::regex kBracket(R"(\[\s*(\d+(?:\s*,\s*\d+)*)\s*\])");
  static const std::regex kNamed(
      R"(\bplayers?\s+(\d+)((?:\s*(?:,\s*and\b|,|&|\band\b)\s*(?:players?\s+)?\d+\b)*))",
      kIcase);
  std::smatch m;
  std::optional<Team> team;
  if (std::regex_search(sentence, m, kBracket)) {
    team = make_team(integers_in(m[1].str()), ctx);
  } else {
    std::vector<int> ids;
    for (std::sregex_iterator it(sentence.begin(), sentence.end(), kNamed), end;
         it != end; ++it) {
      for (int id : integers_in((*it)[0].str())) ids.push_back(id);
    }
    if (ids.empty()) return std::nullopt;
    team = make_team(ids, ctx);
  }
  if (!team) return std::nullopt;
  if (team->size() + 1 == ctx.team_size && !team->contains(ctx.seat)) {
    static const std::regex kSelf(R"(\b(myself|me)\b)", kIcase);
    if (std::regex_search(sentence, kSelf)) team = team->with(ctx.seat);
  }
  if (team->size() != ctx.team_size) return std::nullopt;
  return team;
}

std::optional<Action> fallback_team(std::string_view raw,
                                    const ParseContext& ctx) {
  static const std::regex kIntent(
      R"(propos|choos|chose|select|pick|nominat|team members|team consist|team of|team will)",
      kIcase);
  const auto sentences = split_sentences(raw);
  for (auto it = sentences.rbegin(); it != sentences.rend(); ++it) {
    if (!std::regex_search(*it, kIntent)) continue;
    if (auto team = team_in_sentence(*it, ctx)) return ProposeTeam{*team};
  }
  return std::nullopt;
}

std::vector<std::string> words_of(const std::string& sentence) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : lower(sentence)) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '\'') {
      cur += c;
    } else if (!cur.empty()) {
      words.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

bool negates(const std::string& w) {
  return w == "not" || w == "no" || w == "never" || w == "cannot" ||
         (w.size() > 3 && w.ends_with("n't"));
}

bool starts_with_any(const std::string& w,
                     std::initializer_list<std::string_view> stems) {
  return std::any_of(stems.begin(), stems.end(),
                     [&w](std::string_view s) { return w.starts_with(s); });
}

struct Lexicon {
  std::initializer_list<std::string_view> positive;
  std::initializer_list<std::string_view> negative;
};

// Polarity of the first decision word in a sentence, with a negation in the
// two preceding words flipping it.
std::optional<bool> polarity(const std::string& sentence, const Lexicon& lex) {
  const auto words = words_of(sentence);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string& w = words[i];
    std::optional<bool> hit;
    if (starts_with_any(w, lex.negative)) {
      hit = false;
    } else if (starts_with_any(w, lex.positive)) {
      hit = true;
    } else if (i > 0 && words[i - 1] == "vote" && (w == "yes" || w == "no")) {
      return w == "yes";
    }
    if (!hit) continue;
    for (std::size_t back = 1; back <= 2 && back <= i; ++back) {
      if (negates(words[i - back])) hit = !*hit;
    }
    return hit;
  }
  return std::nullopt;
}

// Prefers the last sentence where the player commits to something ("I
// will", "I vote"), then the last sentence with any decision word.
std::optional<bool> decide(std::string_view raw, const Lexicon& lex) {
  static const std::regex kCommit(
      R"(\bi\s+(will|'ll|vote|choose|decide|have decided|am going to|would|want to|cannot|can't)\b|\bi'll\b|\bmy vote\b)",
      kIcase);
  const auto sentences = split_sentences(raw);
  std::optional<bool> any;
  for (auto it = sentences.rbegin(); it != sentences.rend(); ++it) {
    const auto p = polarity(*it, lex);
    if (!p) continue;
    if (std::regex_search(*it, kCommit)) return p;
    if (!any) any = p;
  }
  return any;
}

const Lexicon kTeamVoteWords{
    {"approv", "support", "accept", "favor", "favour", "endorse"},
    {"reject", "against", "oppos", "disapprov", "declin", "veto"}};
const Lexicon kQuestWords{
    {"pass", "succe", "support", "help"},
    {"fail", "sabotag", "reject", "against", "throw"}};

std::optional<Action> fallback_assassination(std::string_view raw,
                                             const ParseContext& ctx) {
  static const std::regex kAssassinate(R"(assassinat\w*\s+(?:player\s+)?(\d+))",
                                       kIcase);
  static const std::regex kIsMerlin(
      R"(player\s+(\d+)\s*(?:\(merlin\)|(?:is|must be|is likely|could be)\s+(?:the\s+)?merlin))",
      kIcase);
  static const std::regex kBracket(R"(\[\s*(\d+)\s*\])");
  const std::string text(raw);
  for (const std::regex* re : {&kAssassinate, &kIsMerlin, &kBracket}) {
    std::optional<int> found;
    for (std::sregex_iterator it(text.begin(), text.end(), *re), end;
         it != end; ++it) {
      const int id = std::stoi((*it)[1].str());
      if (valid_target(id, ctx)) found = id;
    }
    if (found) return Assassinate{*found};
  }
  return std::nullopt;
}

std::optional<std::vector<double>> scores_from(
    const std::string& text, const std::regex& pair, int num_players) {
  std::vector<double> out(static_cast<std::size_t>(num_players), 0.5);
  bool any = false;
  for (std::sregex_iterator it(text.begin(), text.end(), pair), end; it != end;
       ++it) {
    const int id = std::stoi((*it)[1].str());
    if (id < 0 || id >= num_players) continue;
    out[id] = std::clamp(std::stod((*it)[2].str()), 0.0, 1.0);
    any = true;
  }
  if (!any) return std::nullopt;
  return out;
}

const std::regex& dict_pair() {
  static const std::regex kPair(R"((\d+)\s*:\s*(-?\d+(?:\.\d+)?))");
  return kPair;
}

std::optional<std::vector<double>> brace_scores(const std::string& text,
                                                int num_players,
                                                bool after_answer) {
  static const std::regex kAnswerDict(R"(answer:\s*\{([^}]*)\})", kIcase);
  static const std::regex kDict(R"(\{([^}]*)\})");
  std::smatch m;
  if (!std::regex_search(text, m, after_answer ? kAnswerDict : kDict)) {
    return std::nullopt;
  }
  return scores_from(m[1].str(), dict_pair(), num_players);
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    const auto first = cur.find_first_not_of(" \t\r\n\"'");
    if (first != std::string::npos) out.push_back(cur.substr(first));
    cur.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      flush();
      continue;
    }
    cur += c;
    if (c == '.' || c == '!' || c == '?') {
      const bool decimal = c == '.' && i > 0 && i + 1 < text.size() &&
                           std::isdigit(static_cast<unsigned char>(text[i - 1])) &&
                           std::isdigit(static_cast<unsigned char>(text[i + 1]));
      if (!decimal) flush();
    }
  }
  flush();
  return out;
}

std::optional<Action> parse_answer_line(std::string_view text,
                                        const ParseContext& ctx) {
  static const std::regex kIds(R"(answer:\s*\[([\d,\s]*)\])", kIcase);
  static const std::regex kBareId(R"(answer:\s*(\d+)\b)", kIcase);
  static const std::regex kYesNo(R"(answer:\s*\{?\s*(yes|no)\b(?!\s*\|))",
                                 kIcase);
  const std::string s(text);
  // A reply may echo the template before answering; the last valid answer
  // line wins.
  auto last = [&s](const std::regex& re, auto&& read) {
    decltype(read(std::smatch{})) found;
    for (std::sregex_iterator it(s.begin(), s.end(), re), end; it != end; ++it) {
      if (auto a = read(*it)) found = a;
    }
    return found;
  };
  switch (ctx.phase) {
    case Phase::kTeamSelection:
      return last(kIds, [&ctx](const std::smatch& m) -> std::optional<Action> {
        const auto ids = integers_in(m[1].str());
        auto team = make_team(ids, ctx);
        if (!team || team->size() != ctx.team_size ||
            static_cast<int>(ids.size()) != ctx.team_size) {
          return std::nullopt;
        }
        return ProposeTeam{*team};
      });
    case Phase::kTeamVoting:
    case Phase::kQuest:
      return last(kYesNo, [&ctx](const std::smatch& m) -> std::optional<Action> {
        const bool yes = lower(m[1].str()) == "yes";
        if (ctx.phase == Phase::kTeamVoting) {
          return VoteTeam{yes ? TeamVote::kApprove : TeamVote::kReject};
        }
        return VoteQuest{yes ? QuestVote::kPass : QuestVote::kFail};
      });
    case Phase::kAssassination: {
      auto target = [&ctx](const std::smatch& m) -> std::optional<Action> {
        const auto ids = integers_in(m[1].str());
        if (ids.size() != 1 || !valid_target(ids[0], ctx)) return std::nullopt;
        return Assassinate{ids[0]};
      };
      if (auto a = last(kIds, target)) return a;
      return last(kBareId, target);
    }
    case Phase::kTerminal:
      break;
  }
  return std::nullopt;
}

std::optional<Action> fallback_parse(std::string_view raw,
                                     const ParseContext& ctx) {
  switch (ctx.phase) {
    case Phase::kTeamSelection:
      return fallback_team(raw, ctx);
    case Phase::kTeamVoting:
      if (auto p = decide(raw, kTeamVoteWords)) {
        return VoteTeam{*p ? TeamVote::kApprove : TeamVote::kReject};
      }
      return std::nullopt;
    case Phase::kQuest:
      if (auto p = decide(raw, kQuestWords)) {
        return VoteQuest{*p ? QuestVote::kPass : QuestVote::kFail};
      }
      return std::nullopt;
    case Phase::kAssassination:
      return fallback_assassination(raw, ctx);
    case Phase::kTerminal:
      break;
  }
  return std::nullopt;
}

std::optional<std::vector<double>> parse_probe_answer(std::string_view text,
                                                      int num_players) {
  return brace_scores(std::string(text), num_players, true);
}

std::optional<std::vector<double>> fallback_probe(std::string_view raw,
                                                  int num_players) {
  static const std::regex kLine(
      R"(player\s+(\d+)[^:\n]*:\s*(-?\d+(?:\.\d+)?))", kIcase);
  const std::string text(raw);
  if (auto lines = scores_from(text, kLine, num_players)) return lines;
  return brace_scores(text, num_players, false);
}

}  // namespace avalon
