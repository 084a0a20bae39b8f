#include "obsim/service.hpp"

#include <chrono>
#include <cstdio>
#include <regex>

#include <httplib.h>

#include "obsim/experiment.hpp"
#include "obsim/splitmix.hpp"

namespace obsim {

struct InstrumentService::Session {
  Session(std::string id_, std::uint64_t seed_, const doubleslit::SlitConfig &cfg, double now)
      : id(std::move(id_)), seed(seed_), sampler(cfg, seed_), segment_start(now) {}

  // Draws every emission due on the current segment up to `now`.
  void catch_up(double now) {
    if (!running) {
      return;
    }
    const auto due = doubleslit::events_due(sampler.config().rate_per_s, now - segment_start);
    if (due <= segment_emitted) {
      return;
    }
    const auto pending = static_cast<std::size_t>(due - segment_emitted);
    segment_emitted = due;
    if (!sampler.config().any_open()) {
      return; // nothing reaches the screen
    }
    auto batch = sampler.draw(pending);
    events.insert(events.end(), batch.begin(), batch.end());
  }

  void restart_segment(double now) {
    segment_start = now;
    segment_emitted = 0;
  }

  Json state() const {
    return {{"id", id},
            {"seed", seed},
            {"config", to_json(sampler.config())},
            {"running", running},
            {"event_count", events.size()},
            {"source", to_json(doubleslit::source_representation(sampler.config()))}};
  }

  std::mutex mutex;
  const std::string id;
  const std::uint64_t seed;
  doubleslit::EventSampler sampler;
  std::vector<doubleslit::DetectionEvent> events;
  bool running = false;
  double segment_start;
  std::int64_t segment_emitted = 0;
};

namespace {

using Response = InstrumentService::Response;

Response json_response(int status, const Json &body) {
  return {status, "application/json", body.dump()};
}

Response error(int status, const std::string &message) {
  return json_response(status, Json{{"error", message}});
}

Json parse_body(const std::string &body) {
  if (body.find_first_not_of(" \t\r\n") == std::string::npos) {
    return Json::object();
  }
  try {
    return Json::parse(body);
  } catch (const nlohmann::json::parse_error &e) {
    throw ConfigError(std::string("malformed JSON body: ") + e.what());
  }
}

std::string token(std::uint64_t n) {
  SplitMix64 mix(n ^ 0x6f6273696d5f6964ULL);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(mix()));
  return buf;
}

} // namespace

InstrumentService::Clock InstrumentService::steady_clock() {
  return [] {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
  };
}

InstrumentService::InstrumentService(Clock clock) : clock_(std::move(clock)) {}
InstrumentService::~InstrumentService() = default;

std::shared_ptr<InstrumentService::Session> InstrumentService::find(const std::string &id) {
  std::lock_guard lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Response InstrumentService::create(const std::string &body) {
  const Json req = parse_body(body);
  if (!req.is_object()) {
    throw ConfigError("session request must be a JSON object");
  }
  const auto cfg = apply_slit_patch(doubleslit::SlitConfig{}, req.value("config", Json::object()));
  std::lock_guard lock(sessions_mutex_);
  const auto n = created_++;
  const std::uint64_t seed =
      req.contains("seed") ? req.at("seed").get<std::uint64_t>() : n;
  auto id = token(n);
  auto session = std::make_shared<Session>(id, seed, cfg, clock_());
  Json state = session->state();
  sessions_.emplace(std::move(id), std::move(session));
  return json_response(201, state);
}

Response InstrumentService::handle(const std::string &method, const std::string &path,
                                   const std::multimap<std::string, std::string> &query,
                                   const std::string &body) {
  static const std::regex route(R"(^/sessions/([^/]+)(/[a-z]+)?/?$)");
  try {
    if (path == "/sessions" || path == "/sessions/") {
      if (method != "POST") {
        return error(405, "use POST /sessions");
      }
      return create(body);
    }
    std::smatch m;
    if (!std::regex_match(path, m, route)) {
      return error(404, "no route for " + path);
    }
    auto session = find(m[1]);
    if (!session) {
      return error(404, "unknown session " + m[1].str());
    }
    const std::string action = m[2].matched ? m[2].str() : "";

    std::lock_guard lock(session->mutex);
    const double now = clock_();
    session->catch_up(now);

    if (action.empty() && method == "GET") {
      return json_response(200, session->state());
    }
    if (action == "/config" && method == "PATCH") {
      const auto cfg = apply_slit_patch(session->sampler.config(), parse_body(body));
      session->sampler.reconfigure(cfg);
      session->restart_segment(now);
      return json_response(200, session->state());
    }
    if (action == "/start" && method == "POST") {
      if (!session->running) {
        session->running = true;
        session->restart_segment(now);
      }
      return json_response(200, session->state());
    }
    if (action == "/stop" && method == "POST") {
      session->running = false;
      return json_response(200, session->state());
    }
    if (action == "/events" && method == "GET") {
      std::int64_t since = -1;
      if (const auto it = query.find("since"); it != query.end()) {
        try {
          std::size_t used = 0;
          since = std::stoll(it->second, &used);
          if (used != it->second.size()) {
            throw std::invalid_argument("trailing characters");
          }
        } catch (const std::exception &) {
          return error(400, "since must be an integer tick");
        }
      }
      const auto &events = session->events;
      // Ticks are 0..count-1 in order, so tick > since starts at since + 1.
      const auto first = static_cast<std::size_t>(
          std::clamp<std::int64_t>(since + 1, 0, static_cast<std::int64_t>(events.size())));
      Json list = Json::array();
      for (auto i = first; i < events.size(); ++i) {
        list.push_back(event_to_json(events[i]));
      }
      return json_response(200, Json{{"session", session->id},
                                     {"since", since},
                                     {"events", std::move(list)}});
    }
    if (action == "/pattern" && method == "GET") {
      return {200, "text/csv", pattern_csv(doubleslit::PatternTable(session->sampler.config()))};
    }
    if (action == "/source" && method == "GET") {
      return json_response(200,
                           to_json(doubleslit::source_representation(session->sampler.config())));
    }
    return error(405, method + " not supported on " + path);
  } catch (const ConfigError &e) {
    return error(400, e.what());
  } catch (const DomainError &e) {
    return error(400, e.what());
  } catch (const nlohmann::json::exception &e) {
    return error(400, e.what());
  } catch (const std::exception &e) {
    return error(500, e.what());
  }
}

void InstrumentService::mount(httplib::Server &server) {
  auto forward = [this](const char *method) {
    return [this, method](const httplib::Request &req, httplib::Response &res) {
      const auto out = handle(method, req.path, req.params, req.body);
      res.status = out.status;
      res.set_content(out.body, out.content_type);
    };
  };
  // The operator console may be served from another origin.
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, PATCH, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(".*", [](const httplib::Request &, httplib::Response &res) { res.status = 204; });
  server.Get(".*", forward("GET"));
  server.Post(".*", forward("POST"));
  server.Patch(".*", forward("PATCH"));
  server.Put(".*", forward("PUT"));
  server.Delete(".*", forward("DELETE"));
}

int serve(const std::string &host, int port) {
  InstrumentService service;
  httplib::Server server;
  service.mount(server);
  // The default options add SO_REUSEPORT, which lets a second instance
  // silently share the port.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char *>(&yes), sizeof yes);
  });
  if (!server.bind_to_port(host, port)) {
    std::fprintf(stderr, "cannot bind %s:%d\n", host.c_str(), port);
    return exit_code::bind;
  }
  std::fprintf(stderr, "serving on %s:%d\n", host.c_str(), port);
  return server.listen_after_bind() ? exit_code::ok : exit_code::bind;
}

} // namespace obsim
