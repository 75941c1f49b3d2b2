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


// avalon: run experiment batches, summarize and check replays, host games.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "avalon/gateway_http.hpp"
#include "avalon/metrics.hpp"
#include "avalon/replay.hpp"
#include "avalon/runner.hpp"
#include "avalon/verify.hpp"
#include "avalon/wire.hpp"

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return json::parse(in);
}

// An LLM config file is either one endpoint object or {"actor": ..., "parser": ...}.
void apply_llm_config(avalon::RunSpec& spec, const json& j) {
  if (j.contains("actor") || j.contains("parser")) {
    if (j.contains("actor")) spec.llm = j.at("actor").get<avalon::EndpointConfig>();
    if (j.contains("parser")) spec.parser = j.at("parser").get<avalon::EndpointConfig>();
  } else {
    spec.llm = j.get<avalon::EndpointConfig>();
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

struct RunArgs {
  std::string config_file;
  std::string setting = "baseline";
  long games = 1000;
  std::uint64_t seed = 0;
  int preset = 5;
  std::string discussion = "off";
  std::string llm_config;
  std::string out;
  int parallelism = 1;
  std::string seats;
  bool sealed = false;
  bool timing = false;
  bool naive_dialogue = false;
  std::string prompt_dir;
  bool json_out = false;
};

int cmd_run(const RunArgs& a, const CLI::App& app) {
  avalon::RunSpec spec;
  if (!a.config_file.empty()) spec = read_json_file(a.config_file).get<avalon::RunSpec>();
  auto given = [&app](const char* name) { return app.count(name) > 0; };
  if (given("--preset") || a.config_file.empty()) spec.config = avalon::preset(a.preset);
  if (given("--setting") || a.config_file.empty()) {
    auto s = avalon::parse_setting_key(a.setting);
    if (!s) throw CLI::ValidationError("--setting", "unknown setting " + a.setting);
    spec.setting = *s;
  }
  if (given("--games") || a.config_file.empty()) spec.games = a.games;
  if (given("--seed")) spec.base_seed = a.seed;
  if (given("--parallelism")) spec.parallelism = a.parallelism;
  if (given("--discussion")) spec.config.discussion_enabled = a.discussion == "on";
  if (given("--seats")) spec.seats = split_list(a.seats);
  if (given("--out")) spec.out_dir = a.out;
  if (given("--sealed")) spec.sealed = true;
  if (given("--timing")) spec.record_timing = true;
  if (given("--naive-dialogue")) spec.naive_dialogue = true;
  if (given("--prompts")) spec.prompt_dir = a.prompt_dir;
  if (!a.llm_config.empty()) apply_llm_config(spec, read_json_file(a.llm_config));

  const avalon::BatchResult result = avalon::run_batch(spec);
  if (a.json_out) {
    std::cout << json(result.metrics).dump(2) << "\n";
  } else {
    std::cout << avalon::format_tables(result.metrics,
                                       std::string(avalon::setting_key(spec.setting)));
  }
  return 0;
}

int cmd_stats(const std::string& dir, bool json_out) {
  const auto records = avalon::load_records(dir);
  const std::string setting = records.empty() ? "baseline" : records.front().setting;
  const auto metrics = avalon::compute_metrics(records, avalon::metric_options(setting));
  if (json_out) {
    std::cout << json(metrics).dump(2) << "\n";
  } else {
    std::cout << avalon::format_tables(metrics, setting);
  }
  return 0;
}

int cmd_verify(const std::vector<std::string>& paths) {
  int bad = 0;
  std::vector<std::filesystem::path> files;
  for (const auto& p : paths) {
    if (std::filesystem::is_directory(p)) {
      for (const auto& r : std::filesystem::recursive_directory_iterator(p)) {
        if (r.is_regular_file() && r.path().extension() == ".jsonl") files.push_back(r.path());
      }
    } else {
      files.emplace_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    avalon::VerifyReport report;
    try {
      report = avalon::verify_record(avalon::read_replay(f));
    } catch (const std::exception& e) {
      report.ok = false;
      report.problems.push_back(e.what());
    }
    if (report.ok) {
      std::cout << "OK   " << f.string() << "\n";
      continue;
    }
    ++bad;
    std::cout << "FAIL " << f.string() << "\n";
    for (const auto& p : report.problems) std::cout << "     " << p << "\n";
  }
  std::cout << fmt::format("{} of {} replays verified\n", files.size() - bad, files.size());
  return bad == 0 ? 0 : 1;
}

avalon::gateway::HttpGateway* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resistance Avalon arena"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Play a batch of games and print metrics");
  run_cmd->add_option("--config", run.config_file, "RunSpec JSON file; flags override it")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--setting", run.setting, "baseline|assassin|servant|multi_llm|custom");
  run_cmd->add_option("--games", run.games, "Number of games")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--seed", run.seed, "Base seed");
  run_cmd->add_option("--preset", run.preset, "Player count preset")->check(CLI::Range(5, 10));
  run_cmd->add_option("--discussion", run.discussion, "on|off")
      ->check(CLI::IsMember({"on", "off"}));
  run_cmd->add_option("--llm-config", run.llm_config, "Endpoint JSON for language-model seats")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run.out, "Output directory for replays and metrics");
  run_cmd->add_option("--parallelism", run.parallelism, "Worker threads")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--seats", run.seats, "Custom seat kinds, e.g. naive,llm,naive,naive,naive");
  run_cmd->add_flag("--sealed", run.sealed, "Omit roles from replay headers");
  run_cmd->add_flag("--timing", run.timing, "Record wall-clock time per game");
  run_cmd->add_flag("--naive-dialogue", run.naive_dialogue,
                    "Give naive seats a language-model voice when discussion is on");
  run_cmd->add_option("--prompts", run.prompt_dir, "Directory of prompt templates")
      ->check(CLI::ExistingDirectory);
  run_cmd->add_flag("--json", run.json_out, "Print metrics as JSON");

  std::string stats_dir;
  bool stats_json = false;
  auto* stats_cmd = app.add_subcommand("stats", "Summarize a run directory");
  stats_cmd->add_option("DIR", stats_dir)->required()->check(CLI::ExistingDirectory);
  stats_cmd->add_flag("--json", stats_json, "Print metrics as JSON");

  std::string replay_file;
  auto* replay_cmd = app.add_subcommand("replay", "Pretty-print a replay");
  replay_cmd->add_option("FILE", replay_file)->required()->check(CLI::ExistingFile);

  std::vector<std::string> verify_paths;
  auto* verify_cmd = app.add_subcommand("verify", "Recount replays from their events");
  verify_cmd->add_option("FILE", verify_paths, "Replay files or directories")
      ->required()
      ->check(CLI::ExistingPath);

  avalon::gateway::HttpOptions http;
  avalon::gateway::GatewayOptions gw;
  long ttl_s = 3600;
  long timeout_ms = 0;
  std::string replay_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Host live games over HTTP");
  serve_cmd->add_option("--host", http.host, "Bind address");
  serve_cmd->add_option("--port", http.port, "Port (0 picks one)");
  serve_cmd->add_option("--max-sessions", gw.max_sessions, "Live session limit");
  serve_cmd->add_option("--ttl", ttl_s, "Idle session lifetime in seconds");
  serve_cmd->add_option("--action-timeout-ms", timeout_ms,
                        "Default action after this much silence (0 = never)");
  serve_cmd->add_option("--replay-dir", replay_dir, "Write finished games here");

  std::string dump_dir;
  auto* prompts_cmd = app.add_subcommand("prompts", "Show or export the built-in prompts");
  prompts_cmd->add_option("--dump", dump_dir, "Write templates to this directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run, *run_cmd);
    if (*stats_cmd) return cmd_stats(stats_dir, stats_json);
    if (*replay_cmd) {
      std::cout << avalon::pretty_print(avalon::read_replay(replay_file));
      return 0;
    }
    if (*verify_cmd) return cmd_verify(verify_paths);
    if (*serve_cmd) {
      gw.session_ttl = std::chrono::seconds(ttl_s);
      if (timeout_ms > 0) gw.action_timeout = std::chrono::milliseconds(timeout_ms);
      if (!replay_dir.empty()) gw.replay_dir = replay_dir;
      avalon::gateway::SessionManager sessions(gw);
      avalon::gateway::HttpGateway server(sessions, http);
      const int port = server.bind();
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << fmt::format("listening on http://{}:{}", http.host, port) << std::endl;
      server.serve();
      g_server = nullptr;
      return 0;
    }
    if (*prompts_cmd) {
      const auto& bundle = avalon::PromptBundle::builtin();
      if (!dump_dir.empty()) {
        std::filesystem::create_directories(dump_dir);
        for (const auto& [name, text] : bundle.sources()) {
          std::ofstream(std::filesystem::path(dump_dir) / (name + ".txt")) << text << "\n";
        }
      }
      std::cout << "sha256 " << bundle.checksum() << "\n";
      return 0;
    }
  } catch (const avalon::CredentialError& e) {
    std::cerr << "credential error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
