#include <doctest.h>

#include <thread>

// Eigen before httplib: resolv.h defines _res as a macro.
#include "obsim/experiment.hpp"
#include "obsim/service.hpp"

#include <httplib.h>

using namespace obsim;

namespace {

struct FakeClock {
  std::shared_ptr<double> now = std::make_shared<double>(0.0);
  InstrumentService::Clock fn() const {
    auto n = now;
    return [n] { return *n; };
  }
  void advance(double s) const { *now += s; }
};

struct Harness {
  FakeClock clock;
  InstrumentService service{clock.fn()};

  InstrumentService::Response call(const std::string &method, const std::string &path,
                                   const std::string &body = "",
                                   std::multimap<std::string, std::string> query = {}) {
    return service.handle(method, path, query, body);
  }
  Json json(const std::string &method, const std::string &path, const std::string &body = "",
            int expect = 200) {
    const auto r = call(method, path, body);
    REQUIRE_MESSAGE(r.status == expect, r.body);
    return Json::parse(r.body);
  }
  std::string create(const std::string &body = "") {
    return json("POST", "/sessions", body, 201)["id"].get<std::string>();
  }
  std::vector<doubleslit::DetectionEvent> events(const std::string &id, std::int64_t since = -1) {
    const auto r = call("GET", "/sessions/" + id + "/events", "",
                        {{"since", std::to_string(since)}});
    REQUIRE(r.status == 200);
    const auto j = Json::parse(r.body);
    CHECK(j["session"] == id);
    std::vector<doubleslit::DetectionEvent> out;
    for (const auto &e : j["events"]) {
      out.push_back({e["x_m"].get<double>(), e["y_m"].get<double>(), e["tick"].get<std::int64_t>()});
    }
    return out;
  }
};

} // namespace

TEST_CASE("session creation and lookup") {
  Harness h;
  const auto created = h.json("POST", "/sessions", "", 201);
  CHECK(created["config"] == to_json(doubleslit::SlitConfig{}));
  CHECK(created["running"] == false);
  CHECK(created["event_count"] == 0);
  const auto id = created["id"].get<std::string>();
  CHECK(h.json("GET", "/sessions/" + id)["id"] == id);
  CHECK(h.create() != id);

  CHECK(h.call("GET", "/sessions/nope").status == 404);
  CHECK(h.call("GET", "/elsewhere").status == 404);
  CHECK(h.call("GET", "/sessions").status == 405);
  CHECK(h.call("POST", "/sessions", "{bad json").status == 400);
  const auto bad = h.call("PATCH", "/sessions/" + id + "/config", R"({"wavelength_m": -1})");
  CHECK(bad.status == 400);
  CHECK(Json::parse(bad.body).contains("error"));
  CHECK(h.call("DELETE", "/sessions/" + id).status == 405);
  const auto bad_since = h.call("GET", "/sessions/" + id + "/events", "", {{"since", "x"}});
  CHECK(bad_since.status == 400);
}

TEST_CASE("emission follows the rate cadence and the cursor") {
  Harness h;
  const auto id = h.create(R"({"seed": 3})");
  h.clock.advance(10.0);
  CHECK(h.events(id).empty()); // not started

  h.json("POST", "/sessions/" + id + "/start");
  h.clock.advance(2.5);
  const auto all = h.events(id);
  REQUIRE(all.size() == 250);
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(all[i].tick == static_cast<std::int64_t>(i));
  }
  const auto tail = h.events(id, 199);
  REQUIRE(tail.size() == 50);
  CHECK(tail.front().tick == 200);
  CHECK(h.events(id, 249).empty());

  h.json("POST", "/sessions/" + id + "/stop");
  h.clock.advance(5.0);
  CHECK(h.json("GET", "/sessions/" + id)["event_count"] == 250);

  // The draws are the seeded sampler's, in order.
  const auto reference = doubleslit::sample_events(doubleslit::SlitConfig{}, 250, 3);
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(all[i].x_m == reference[i].x_m);
  }
}

TEST_CASE("which-path toggle removes the fringes; closing the slits halts arrivals") {
  Harness h;
  const auto id = h.create(R"({"seed": 12, "config": {"rate_per_s": 1000}})");
  h.json("POST", "/sessions/" + id + "/start");
  h.clock.advance(100.0);
  const auto coherent = h.events(id);
  REQUIRE(coherent.size() == 100000);
  CHECK(doubleslit::visibility(coherent, doubleslit::SlitConfig{}) > 0.9);

  const auto patched = h.json("PATCH", "/sessions/" + id + "/config", R"({"which_path": true})");
  CHECK(patched["config"]["which_path"] == true);
  CHECK(patched["source"]["mode"] == "mixture");
  const auto cursor = coherent.back().tick;
  h.clock.advance(100.0);
  const auto after = h.events(id, cursor);
  REQUIRE(after.size() == 100000);
  CHECK(after.front().tick == cursor + 1);
  auto wp = doubleslit::SlitConfig{};
  wp.which_path = true;
  CHECK(doubleslit::visibility(after, wp) < 0.05);

  h.json("PATCH", "/sessions/" + id + "/config", R"({"left_open": false, "right_open": false})");
  const auto count = h.json("GET", "/sessions/" + id)["event_count"];
  h.clock.advance(50.0);
  CHECK(h.json("GET", "/sessions/" + id)["event_count"] == count);
  CHECK(h.json("GET", "/sessions/" + id + "/source")["mode"] == "none");

  const auto pattern = h.call("GET", "/sessions/" + id + "/pattern");
  CHECK(pattern.status == 200);
  CHECK(pattern.content_type == "text/csv");
  CHECK(pattern.body.rfind("x_m,intensity\n", 0) == 0);
}

TEST_CASE("sessions are isolated") {
  Harness h;
  const auto a = h.create(R"({"seed": 1})");
  const auto b = h.create(R"({"seed": 2, "config": {"right_open": false}})");
  h.json("POST", "/sessions/" + a + "/start");
  h.clock.advance(0.37);
  h.json("POST", "/sessions/" + b + "/start");
  std::vector<doubleslit::DetectionEvent> got_a, got_b;
  for (int i = 0; i < 40; ++i) {
    h.clock.advance(0.113);
    auto ea = h.events(a, got_a.empty() ? -1 : got_a.back().tick);
    got_a.insert(got_a.end(), ea.begin(), ea.end());
    h.clock.advance(0.05);
    auto eb = h.events(b, got_b.empty() ? -1 : got_b.back().tick);
    got_b.insert(got_b.end(), eb.begin(), eb.end());
  }
  auto left = doubleslit::SlitConfig{};
  left.right_open = false;
  const auto ref_a = doubleslit::sample_events(doubleslit::SlitConfig{}, got_a.size(), 1);
  const auto ref_b = doubleslit::sample_events(left, got_b.size(), 2);
  REQUIRE(got_a.size() > 100);
  REQUIRE(got_b.size() > 100);
  for (std::size_t i = 0; i < got_a.size(); ++i) {
    CHECK(got_a[i].x_m == ref_a[i].x_m);
    CHECK(got_a[i].tick == static_cast<std::int64_t>(i));
  }
  for (std::size_t i = 0; i < got_b.size(); ++i) {
    CHECK(got_b[i].x_m == ref_b[i].x_m);
  }
}

TEST_CASE("HTTP transport") {
  InstrumentService service;
  httplib::Server server;
  service.mount(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  const auto created = client.Post("/sessions", R"({"seed": 9, "config": {"rate_per_s": 20000}})",
                                   "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  const auto id = Json::parse(created->body)["id"].get<std::string>();

  const auto patched = client.Patch("/sessions/" + id + "/config", R"({"left_open": false})",
                                    "application/json");
  REQUIRE(patched);
  CHECK(patched->status == 200);
  CHECK(Json::parse(patched->body)["config"]["left_open"] == false);

  REQUIRE(client.Post("/sessions/" + id + "/start", "", "application/json")->status == 200);
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  const auto events = client.Get("/sessions/" + id + "/events?since=-1");
  REQUIRE(events);
  CHECK(events->status == 200);
  CHECK(Json::parse(events->body)["events"].size() > 0);
  const auto missing = client.Get("/sessions/unknown");
  CHECK(missing->status == 404);
  CHECK(Json::parse(missing->body).contains("error"));

  // A second instance on a taken port reports the bind failure.
  CHECK(serve("127.0.0.1", port) == exit_code::bind);

  server.stop();
  worker.join();
}
