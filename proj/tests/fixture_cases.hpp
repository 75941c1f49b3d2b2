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


// Fixture-driven checks shared by the unit tests and the acceptance binary.

#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "avalon/llm_parse.hpp"
#include "avalon/prompts.hpp"
#include "avalon/wire.hpp"

namespace avalon::fixtures {

inline std::filesystem::path root() { return AVALON_TEST_FIXTURES; }

/// File contents minus one trailing newline.
inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

struct CaseResult {
  std::string name;
  std::optional<std::string> error;
};

inline bool close(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-9) return false;
  }
  return true;
}

/// Runs every entry of parse_cases.json.
inline std::vector<CaseResult> run_parse_cases() {
  using nlohmann::json;
  const json manifest = json::parse(read_text(root() / "parse_cases.json"));
  const int n = manifest.at("num_players").get<int>();
  std::vector<CaseResult> out;
  for (const json& c : manifest.at("cases")) {
    CaseResult r{c.at("name").get<std::string>(), std::nullopt};
    const std::string text =
        read_text(root() / "transcripts" / c.at("file").get<std::string>());
    const std::string mode = c.at("mode").get<std::string>();
    if (mode == "probe_answer" || mode == "probe_fallback") {
      const auto got = mode == "probe_answer" ? parse_probe_answer(text, n)
                                              : fallback_probe(text, n);
      const auto want = c.at("expect").get<std::vector<double>>();
      if (!got) {
        r.error = "no scores found";
      } else if (!close(*got, want)) {
        r.error = fmt::format("got {}", json(*got).dump());
      }
      out.push_back(std::move(r));
      continue;
    }
    ParseContext ctx;
    const auto phase = parse_phase_key(c.at("phase").get<std::string>());
    if (!phase) throw std::runtime_error("bad phase in " + r.name);
    ctx.phase = *phase;
    ctx.num_players = n;
    ctx.team_size = c.value("team_size", 0);
    ctx.seat = c.at("seat").get<int>();
    const auto got = mode == "answer" ? parse_answer_line(text, ctx)
                                      : fallback_parse(text, ctx);
    const Action want = decode<Action>(c.at("expect"));
    if (!got) {
      r.error = "unparsed";
    } else if (!(*got == want)) {
      r.error = fmt::format("got {}, want {}", describe(*got), describe(want));
    }
    out.push_back(std::move(r));
  }
  return out;
}

/// Golden renderings of every template with example values.
inline std::vector<CaseResult> run_prompt_goldens(const PromptBundle& b) {
  const auto dir = root() / "prompts";
  std::vector<std::pair<std::string, std::string>> rendered;

  const auto servant = render_system_context(b, {2, Role::kServant, 5, std::nullopt});
  const auto assassin = render_system_context(
      b, {0, Role::kAssassin, 5,
          std::vector<Side>{Side::kEvil, Side::kGood, Side::kEvil, Side::kGood,
                            Side::kGood}});
  rendered.emplace_back("rules", servant.size() > 0 ? servant[0].content : "");
  rendered.emplace_back("role_servant_2", servant.size() > 1 ? servant[1].content : "");
  rendered.emplace_back("role_assassin_0", assassin.size() > 1 ? assassin[1].content : "");
  rendered.emplace_back("reveal_assassin_0", assassin.size() > 2 ? assassin[2].content : "");
  rendered.emplace_back("request_team_selection",
                        render_request(b, Phase::kTeamSelection, 5, 2, std::nullopt));
  rendered.emplace_back("request_team_vote",
                        render_request(b, Phase::kTeamVoting, 5, 2, Team{1, 3}));
  rendered.emplace_back("request_quest",
                        render_request(b, Phase::kQuest, 5, 3, Team{1, 2, 3}));
  rendered.emplace_back("request_assassination",
                        render_request(b, Phase::kAssassination, 5, 0, std::nullopt));
  rendered.emplace_back("discuss_leader", render_discussion(b, 2, 2, {}));
  rendered.emplace_back(
      "discuss_player",
      render_discussion(b, 2, 4,
                        {{2, "I propose Player 0, Player 2 and Player 4"},
                         {3, "I agree with the leader's choice."}}));
  rendered.emplace_back("parse_team_selection", render_parse(b, Phase::kTeamSelection));
  rendered.emplace_back("parse_team_vote", render_parse(b, Phase::kTeamVoting));
  rendered.emplace_back("parse_quest", render_parse(b, Phase::kQuest));
  rendered.emplace_back("parse_assassination", render_parse(b, Phase::kAssassination));
  rendered.emplace_back("recap", b.recap.render({}));
  rendered.emplace_back("probe", render_probe(b, 5));
  rendered.emplace_back("probe_parse", render_probe_parse(b, 5));

  std::vector<CaseResult> out;
  for (const auto& [name, text] : rendered) {
    CaseResult r{name, std::nullopt};
    const std::string want = read_text(dir / (name + ".txt"));
    if (text != want) {
      std::size_t i = 0;
      while (i < text.size() && i < want.size() && text[i] == want[i]) ++i;
      r.error = fmt::format("differs at byte {}: got \"{}\", want \"{}\"", i,
                            text.substr(i, 40), want.substr(i, 40));
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace avalon::fixtures
