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


#include "avalon/gateway_http.hpp"

#include <atomic>
#include <condition_variable>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>

namespace avalon::gateway {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", code}, {"message", message}}.dump(), kJson);
}

std::string bearer(const httplib::Request& req, bool allow_query) {
  const std::string h = req.get_header_value("Authorization");
  constexpr std::string_view prefix = "Bearer ";
  if (h.rfind(prefix, 0) == 0) return h.substr(prefix.size());
  if (allow_query && req.has_param("token")) return req.get_param_value("token");
  return {};
}

Seat seat_param(const httplib::Request& req) {
  try {
    return std::stoi(req.matches[2].str());
  } catch (const std::exception&) {
    throw GatewayError(404, "not_found", "bad seat");
  }
}

json body_json(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw GatewayError(400, "malformed_json", e.what());
  }
}

std::optional<std::int64_t> since_param(const httplib::Request& req) {
  std::string v;
  if (req.has_param("since")) {
    v = req.get_param_value("since");
  } else if (req.has_header("Last-Event-ID")) {
    v = req.get_header_value("Last-Event-ID");
  } else {
    return std::nullopt;
  }
  try {
    return std::stoll(v);
  } catch (const std::exception&) {
    throw GatewayError(400, "bad_cursor", "cursor must be an integer");
  }
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const GatewayError& e) {
      send_error(res, e.status(), e.code(), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

std::string sse_item(const StreamItem& item) {
  return fmt::format("id: {}\nevent: {}\ndata: {}\n\n", item.id,
                     item.event.value("type", "event"), item.event.dump());
}

}  // namespace

struct HttpGateway::Impl {
  SessionManager& sessions;
  HttpOptions options;
  httplib::Server server;
  std::atomic<bool> stopping{false};
  int port = -1;
  std::thread listener;
  std::thread ticker;
  std::mutex tick_mu;
  std::condition_variable tick_cv;

  Impl(SessionManager& s, HttpOptions o) : sessions(s), options(std::move(o)) {
    routes();
  }

  void stream(const httplib::Request& req, httplib::Response& res,
              std::optional<Seat> seat) {
    const std::string game = req.matches[1].str();
    const Viewer viewer = sessions.authorize(game, seat, bearer(req, true));
    const auto since = since_param(req);
    const bool follow = !(req.has_param("follow") && req.get_param_value("follow") == "0");
    // Resolve the first slice now so errors surface as plain HTTP errors.
    auto first = std::make_shared<EventSlice>(sessions.events(game, viewer, since));
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream",
        [this, game, viewer, follow, first](std::size_t, httplib::DataSink& sink) {
          std::int64_t cursor = first->cursor;
          auto write = [&sink](const std::string& s) {
            return sink.write(s.data(), s.size());
          };
          if (first->snapshot) {
            if (!write(fmt::format("event: snapshot\ndata: {}\n\n",
                                   first->snapshot->dump()))) {
              return false;
            }
          }
          for (const auto& item : first->items) {
            if (!write(sse_item(item))) return false;
          }
          bool finished = first->finished;
          while (follow && !finished && !stopping.load()) {
            if (!sessions.wait(game, cursor, options.heartbeat)) {
              if (!write(": heartbeat\n\n")) return false;
              continue;
            }
            EventSlice next;
            try {
              next = sessions.events(game, viewer, cursor);
            } catch (const GatewayError&) {
              break;
            }
            for (const auto& item : next.items) {
              if (!write(sse_item(item))) return false;
            }
            cursor = next.cursor;
            finished = next.finished;
          }
          if (finished) write("event: end\ndata: {}\n\n");
          sink.done();
          return true;
        });
  }

  void routes() {
    server.Post("/games", guarded([this](const httplib::Request& req,
                                         httplib::Response& res) {
      const Created c = sessions.create_game(parse_create_request(body_json(req)));
      res.status = 201;
      res.set_content(json(c).dump(), kJson);
    }));
    server.Get(R"(/games/([0-9a-f]+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 res.set_content(sessions.status(req.matches[1].str()).dump(), kJson);
               }));
    server.Post(R"(/games/([0-9a-f]+)/seats/(\d+)/join)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  res.set_content(sessions
                                      .join(req.matches[1].str(), seat_param(req),
                                            bearer(req, false))
                                      .dump(),
                                  kJson);
                }));
    server.Get(R"(/games/([0-9a-f]+)/seats/(\d+)/observation)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 res.set_content(sessions
                                     .observation(req.matches[1].str(),
                                                  seat_param(req), bearer(req, false))
                                     .dump(),
                                 kJson);
               }));
    server.Post(R"(/games/([0-9a-f]+)/seats/(\d+)/action)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  res.set_content(sessions
                                      .submit_action(req.matches[1].str(),
                                                     seat_param(req),
                                                     bearer(req, false),
                                                     body_json(req))
                                      .dump(),
                                  kJson);
                }));
    server.Post(R"(/games/([0-9a-f]+)/seats/(\d+)/chat)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const json body = body_json(req);
                  if (!body.is_object() || !body.contains("text") ||
                      !body.at("text").is_string()) {
                    throw GatewayError(400, "malformed_chat", "expected {\"text\": ...}");
                  }
                  res.set_content(sessions
                                      .submit_chat(req.matches[1].str(),
                                                   seat_param(req), bearer(req, false),
                                                   body.at("text").get<std::string>())
                                      .dump(),
                                  kJson);
                }));
    server.Get(R"(/games/([0-9a-f]+)/seats/(\d+)/events)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 stream(req, res, seat_param(req));
               }));
    server.Get(R"(/games/([0-9a-f]+)/spectate)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 res.set_content(
                     sessions.spectate(req.matches[1].str(), bearer(req, true)).dump(),
                     kJson);
               }));
    server.Get(R"(/games/([0-9a-f]+)/events)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 stream(req, res, std::nullopt);
               }));
  }

  void tick_loop() {
    std::unique_lock lock(tick_mu);
    while (!stopping.load()) {
      tick_cv.wait_for(lock, options.tick_interval);
      if (stopping.load()) break;
      sessions.tick();
    }
  }
};

HttpGateway::HttpGateway(SessionManager& sessions, HttpOptions options)
    : impl_(std::make_unique<Impl>(sessions, std::move(options))) {}

HttpGateway::~HttpGateway() { stop(); }

int HttpGateway::bind() {
  if (impl_->port >= 0) return impl_->port;
  if (impl_->options.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(impl_->options.host);
  } else if (impl_->server.bind_to_port(impl_->options.host, impl_->options.port)) {
    impl_->port = impl_->options.port;
  }
  if (impl_->port < 0) {
    throw std::runtime_error(fmt::format("cannot bind {}:{}", impl_->options.host,
                                         impl_->options.port));
  }
  return impl_->port;
}

void HttpGateway::serve() {
  bind();
  impl_->ticker = std::thread([this] { impl_->tick_loop(); });
  impl_->server.listen_after_bind();
}

void HttpGateway::start() {
  bind();
  impl_->listener = std::thread([this] { serve(); });
  impl_->server.wait_until_ready();
}

void HttpGateway::stop() {
  if (impl_->stopping.exchange(true)) return;
  impl_->tick_cv.notify_all();
  impl_->server.stop();
  if (impl_->listener.joinable()) impl_->listener.join();
  if (impl_->ticker.joinable()) impl_->ticker.join();
}

int HttpGateway::port() const { return impl_->port; }

}  // namespace avalon::gateway
