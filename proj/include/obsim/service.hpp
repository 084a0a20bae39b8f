#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "obsim/doubleslit.hpp"
#include "obsim/serialization.hpp"

namespace httplib {
class Server;
}

namespace obsim {

/// Double-slit instrument sessions behind a small JSON-over-HTTP API.
///
/// Routing is transport-independent (handle()); mount() attaches it to a
/// cpp-httplib server. Each session is guarded by its own mutex, so a
/// configuration change never lands inside a sampling batch. Emission follows
/// a fixed 1/rate cadence measured on the injected clock.
class InstrumentService {
public:
  using Clock = std::function<double()>; // monotonic seconds

  struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
  };

  explicit InstrumentService(Clock clock = steady_clock());
  ~InstrumentService();

  Response handle(const std::string &method, const std::string &path,
                  const std::multimap<std::string, std::string> &query,
                  const std::string &body);

  void mount(httplib::Server &server);

  static Clock steady_clock();

private:
  struct Session;
  std::shared_ptr<Session> find(const std::string &id);

  Response create(const std::string &body);

  Clock clock_;
  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t created_ = 0;
};

/// Blocks serving the API on host:port; returns exit_code::bind on failure.
int serve(const std::string &host, int port);

} // namespace obsim
