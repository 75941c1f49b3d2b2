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

#include "avalon/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "avalon/naive.hpp"
#include "avalon/rng.hpp"
#include "avalon/wire.hpp"

namespace avalon {

using nlohmann::json;

namespace {

constexpr int kMaxTurns = 2000;

std::string_view probe_key(ProbeTiming t) {
  return t == ProbeTiming::kNever ? "never" : "after_final_mission";
}

bool uses_llm(const RunSpec& spec) {
  switch (spec.setting) {
    case Setting::kBaseline:
      return spec.naive_dialogue && spec.config.discussion_enabled;
    case Setting::kCustom:
      return std::find(spec.seats.begin(), spec.seats.end(), "llm") !=
                 spec.seats.end() ||
             (spec.naive_dialogue && spec.config.discussion_enabled);
    default:
      return true;
  }
}

std::shared_ptr<ChatClient> make_client(const RunSpec& spec,
                                        std::uint64_t index, Seat seat,
                                        ClientUse use) {
  if (spec.client_factory) return spec.client_factory(index, seat, use);
  const EndpointConfig& cfg =
      use == ClientUse::kParser && spec.parser ? *spec.parser : spec.llm;
  return std::make_shared<HttpChatClient>(cfg);
}

std::unique_ptr<Agent> make_llm(const RunSpec& spec, std::uint64_t index,
                                Seat seat, const PromptBundle& bundle) {
  return std::make_unique<LlmAgent>(
      make_client(spec, index, seat, ClientUse::kActor),
      make_client(spec, index, seat, ClientUse::kParser), bundle,
      spec.llm_options);
}

PromptBundle load_bundle(const RunSpec& spec) {
  PromptBundle bundle =
      spec.prompt_dir ? PromptBundle::load(*spec.prompt_dir) : PromptBundle::builtin();
  if (spec.prompt_sha256 && bundle.checksum() != *spec.prompt_sha256) {
    throw RunError(fmt::format("prompt bundle hashes to {}, expected {}",
                               bundle.checksum(), *spec.prompt_sha256));
  }
  return bundle;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RunError("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string_view setting_key(Setting setting) {
  switch (setting) {
    case Setting::kBaseline:
      return "baseline";
    case Setting::kAssassin:
      return "assassin";
    case Setting::kServant:
      return "servant";
    case Setting::kMultiLlm:
      return "multi_llm";
    case Setting::kCustom:
      return "custom";
  }
  return "custom";
}

std::optional<Setting> parse_setting_key(std::string_view key) {
  for (Setting s : {Setting::kBaseline, Setting::kAssassin, Setting::kServant,
                    Setting::kMultiLlm, Setting::kCustom}) {
    if (setting_key(s) == key) return s;
  }
  return std::nullopt;
}

void RunSpec::validate() const {
  config.validate();
  if (games < 0) throw RunError("games must not be negative");
  if (parallelism < 1) throw RunError("parallelism must be at least 1");
  if (max_anomalies < 0) throw RunError("max_anomalies must not be negative");
  if (setting == Setting::kCustom) {
    if (static_cast<int>(seats.size()) != config.num_players) {
      throw RunError(fmt::format("custom setting lists {} seats for {} players",
                                 seats.size(), config.num_players));
    }
    for (const auto& k : seats) {
      if (k != "naive" && k != "llm") {
        throw RunError(fmt::format(
            "seat kind '{}' cannot run in a batch; remote and human seats "
            "join through the gateway",
            k));
      }
    }
  }
  if (setting == Setting::kServant &&
      std::count(config.roles.begin(), config.roles.end(), Role::kServant) == 0) {
    throw RunError("the servant setting needs a Servant in the role deck");
  }
  if (setting == Setting::kAssassin &&
      std::count(config.roles.begin(), config.roles.end(), Role::kAssassin) == 0) {
    throw RunError("the assassin setting needs an Assassin in the role deck");
  }
}

void to_json(json& j, const RunSpec& s) {
  j = json{{"config", s.config},
           {"setting", setting_key(s.setting)},
           {"games", s.games},
           {"base_seed", s.base_seed},
           {"parallelism", s.parallelism},
           {"llm", s.llm},
           {"naive_dialogue", s.naive_dialogue},
           {"record_timing", s.record_timing},
           {"sealed", s.sealed},
           {"max_retries", s.orchestrator.max_retries},
           {"probe", probe_key(s.orchestrator.probe)},
           {"max_anomalies", s.max_anomalies},
           {"summary_char_cap", s.llm_options.summary_char_cap},
           {"token_cap", s.llm_options.token_cap}};
  if (!s.seats.empty()) j["seats"] = s.seats;
  if (s.out_dir) j["out_dir"] = s.out_dir->string();
  if (s.parser) j["parser"] = *s.parser;
  if (s.prompt_dir) j["prompt_dir"] = s.prompt_dir->string();
  if (s.prompt_sha256) j["prompt_sha256"] = *s.prompt_sha256;
}

void from_json(const json& j, RunSpec& s) {
  s = RunSpec{};
  if (j.contains("config")) s.config = j.at("config").get<GameConfig>();
  if (j.contains("setting")) {
    const auto key = j.at("setting").get<std::string>();
    auto setting = parse_setting_key(key);
    if (!setting) throw RunError("unknown setting " + key);
    s.setting = *setting;
  }
  s.seats = j.value("seats", std::vector<std::string>{});
  s.games = j.value("games", 0L);
  s.base_seed = j.value("base_seed", std::uint64_t{0});
  s.parallelism = j.value("parallelism", 1);
  if (j.contains("out_dir")) s.out_dir = j.at("out_dir").get<std::string>();
  if (j.contains("llm")) s.llm = j.at("llm").get<EndpointConfig>();
  if (j.contains("parser")) s.parser = j.at("parser").get<EndpointConfig>();
  s.naive_dialogue = j.value("naive_dialogue", false);
  s.record_timing = j.value("record_timing", false);
  s.sealed = j.value("sealed", false);
  s.orchestrator.max_retries = j.value("max_retries", 1);
  const auto probe = j.value("probe", std::string("after_final_mission"));
  if (probe == "never") {
    s.orchestrator.probe = ProbeTiming::kNever;
  } else if (probe != "after_final_mission") {
    throw RunError("unknown probe timing " + probe);
  }
  s.max_anomalies = j.value("max_anomalies", 20);
  s.llm_options.summary_char_cap =
      j.value("summary_char_cap", s.llm_options.summary_char_cap);
  s.llm_options.token_cap = j.value("token_cap", s.llm_options.token_cap);
  if (j.contains("prompt_dir")) s.prompt_dir = j.at("prompt_dir").get<std::string>();
  if (j.contains("prompt_sha256")) {
    s.prompt_sha256 = j.at("prompt_sha256").get<std::string>();
  }
}

std::vector<std::string> seat_kinds(const RunSpec& spec,
                                    const std::vector<Role>& roles) {
  std::vector<std::string> kinds(roles.size(), "naive");
  switch (spec.setting) {
    case Setting::kBaseline:
      break;
    case Setting::kAssassin:
      for (std::size_t s = 0; s < roles.size(); ++s) {
        if (roles[s] == Role::kAssassin) kinds[s] = "llm";
      }
      break;
    case Setting::kServant: {
      auto it = std::find(roles.begin(), roles.end(), Role::kServant);
      if (it != roles.end()) kinds[it - roles.begin()] = "llm";
      break;
    }
    case Setting::kMultiLlm:
      std::fill(kinds.begin(), kinds.end(), "llm");
      break;
    case Setting::kCustom:
      kinds = spec.seats;
      break;
  }
  return kinds;
}

GameRecord play_game(const RunSpec& spec, std::uint64_t index,
                     const PromptBundle& bundle) {
  const auto started = std::chrono::steady_clock::now();
  GameRecord record;
  record.config = spec.config;
  record.base_seed = spec.base_seed;
  record.game_index = index;
  record.seed = game_seed(spec.base_seed, index);
  record.setting = std::string(setting_key(spec.setting));

  Transition t = new_game(spec.config, record.seed);
  GameState state = std::move(t.state);
  record.events = std::move(t.events);
  record.roles = state.roles;
  record.agent_kinds = seat_kinds(spec, state.roles);

  const bool dialogue = spec.naive_dialogue && spec.config.discussion_enabled;
  std::vector<std::unique_ptr<Agent>> owned;
  for (Seat s = 0; s < spec.config.num_players; ++s) {
    if (record.agent_kinds[s] == "llm") {
      owned.push_back(make_llm(spec, index, s, bundle));
      continue;
    }
    auto naive = std::make_unique<NaiveAgent>(stream_seed(
        record.seed, static_cast<std::uint64_t>(s), StreamPurpose::kPolicy));
    if (dialogue) naive->set_speaker(make_llm(spec, index, s, bundle));
    owned.push_back(std::move(naive));
  }
  if (uses_llm(spec)) record.prompt_sha256 = bundle.checksum();
  std::vector<Agent*> agents;
  for (auto& a : owned) agents.push_back(a.get());

  try {
    start_agents(state, record.events, agents);
    int anomalies = 0;
    int turns = 0;
    while (!state.terminal()) {
      if (++turns > kMaxTurns) throw std::runtime_error("turn limit exceeded");
      Transition step = drive_turn(state, agents, spec.orchestrator);
      state = std::move(step.state);
      for (auto& e : step.events) {
        if (std::holds_alternative<event::AgentAnomaly>(e)) ++anomalies;
        record.events.push_back(std::move(e));
      }
      if (anomalies > spec.max_anomalies) {
        throw AgentFailure(
            fmt::format("{} agent anomalies exceed the limit of {}", anomalies,
                        spec.max_anomalies));
      }
    }
    record.result = state.result;
  } catch (const CredentialError&) {
    throw;
  } catch (const std::exception& e) {
    record.aborted = true;
    record.abort_reason = e.what();
    record.result.reset();
  }
  if (spec.record_timing) {
    record.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();
  }
  return record;
}

MetricOptions metric_options(std::string_view setting) {
  MetricOptions options;
  if (setting == setting_key(Setting::kServant)) options.probe_kind = "llm";
  return options;
}

BatchResult run_batch(const RunSpec& spec) {
  spec.validate();
  const PromptBundle bundle = load_bundle(spec);
  if (uses_llm(spec) && !spec.client_factory) {
    for (const EndpointConfig* cfg : {&spec.llm, spec.parser ? &*spec.parser : nullptr}) {
      if (!cfg || cfg->credential_env.empty()) continue;
      const char* value = std::getenv(cfg->credential_env.c_str());
      if (value == nullptr || *value == '\0') {
        throw CredentialError(fmt::format(
            "environment variable {} is not set", cfg->credential_env));
      }
    }
  }

  std::optional<std::filesystem::path> games_dir;
  if (spec.out_dir) {
    games_dir = *spec.out_dir / "games";
    std::filesystem::create_directories(*games_dir);
  }

  BatchResult result;
  result.records.resize(static_cast<std::size_t>(spec.games));
  std::atomic<long> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    while (!stop.load()) {
      const long i = next.fetch_add(1);
      if (i >= spec.games) return;
      try {
        GameRecord r = play_game(spec, static_cast<std::uint64_t>(i), bundle);
        if (games_dir) {
          write_replay(r, *games_dir / fmt::format("game_{:06d}.jsonl", i),
                       spec.sealed);
        }
        result.records[static_cast<std::size_t>(i)] = std::move(r);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        stop.store(true);
        return;
      }
    }
  };

  const int threads =
      static_cast<int>(std::min<long>(spec.parallelism, std::max(spec.games, 1L)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  result.metrics = compute_metrics(result.records,
                                   metric_options(setting_key(spec.setting)));
  if (spec.out_dir) {
    write_text(*spec.out_dir / "metrics.json",
               json(result.metrics).dump(2) + "\n");
    json run = spec;
    run["prompt_sha256"] = bundle.checksum();
    run["format_version"] = kReplayFormatVersion;
    write_text(*spec.out_dir / "run.json", run.dump(2) + "\n");
  }
  return result;
}

std::vector<GameRecord> load_records(const std::filesystem::path& dir) {
  std::filesystem::path root = dir;
  if (std::filesystem::is_directory(dir / "games")) root = dir / "games";
  if (!std::filesystem::is_directory(root)) {
    throw RunError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<GameRecord> records;
  records.reserve(files.size());
  for (const auto& f : files) {
    try {
      records.push_back(read_replay(f));
    } catch (const ReplayError& e) {
      throw ReplayError(e.line(), f.string() + ": " + e.what());
    }
  }
  return records;
}

}  // namespace avalon
