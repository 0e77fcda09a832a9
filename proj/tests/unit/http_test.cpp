#include <filesystem>
#include <sstream>
#include <thread>

#include "advisor/service/clock.hpp"
#include "advisor/service/http_server.hpp"
#include "doctest.h"
#include "httplib.h"
#include "support/oracles.hpp"
#include "support/service_driver.hpp"

using namespace advisor;
using namespace advisor::service;
using advisor::testing::json;

namespace fs = std::filesystem;

namespace {

struct Loopback {
  ServiceConfig config;
  std::unique_ptr<AdvisorService> service;
  std::ostringstream log;
  std::unique_ptr<HttpServer> server;
  std::thread thread;
  int port = -1;

  Loopback() {
    config.bank_path = fs::path(ADVISOR_TEST_DATA_DIR) / "bank-minimal.txt";
    config.seed = 3;
    config.admin_token = "secret";
    service = std::make_unique<AdvisorService>(config, std::make_shared<ManualClock>());
    server = std::make_unique<HttpServer>(*service, &log);
    port = server->bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    thread = std::thread([this] { server->listen_after_bind(); });
    server->wait_until_ready();
  }
  ~Loopback() {
    server->stop();
    thread.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_connection_timeout(5);
    return c;
  }
};

}  // namespace

TEST_CASE("full session over loopback HTTP") {
  Loopback lb;
  auto c = lb.client();
  auto res = c.Post("/sessions", testing::create_body(testing::boundary_student(), "CS"), "application/json");
  REQUIRE(res);
  REQUIRE(res->status == 201);
  CHECK(res->get_header_value("Content-Type").find("application/json") == 0);
  const auto id = json::parse(res->body).at("session-id").get<std::string>();

  const auto targets = testing::targets_for(testing::boundary_student());
  std::map<assessment::Subject, int> given;
  for (int i = 0; i < 200; ++i) {
    res = c.Get("/sessions/" + id + "/question");
    REQUIRE(res);
    if (res->status != 200) break;
    const auto qid = json::parse(res->body).at("question").at("id").get<std::string>();
    const auto* q = lb.service->bank().find(qid);
    const bool right = given[q->subject]++ < targets.at(q->subject);
    const int choice = right ? q->correct_index : (q->correct_index == 0 ? 1 : 0);
    res = c.Post("/sessions/" + id + "/answer", json{{"question-id", qid}, {"choice-index", choice}}.dump(),
                 "application/json");
    REQUIRE(res);
    REQUIRE(res->status == 200);
  }
  CHECK(res->status == 409);

  res = c.Get("/sessions/" + id + "/report?format=raw");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->body.find("Recommended=TRUE\r\n\r\n") != std::string::npos);
  res = c.Get("/sessions/" + id + "/report");
  REQUIRE(res);
  CHECK(json::parse(res->body).at("verdicts").size() == 1);
  CHECK(lb.log.str().find("\"status\":201") != std::string::npos);
}

TEST_CASE("HTTP errors carry JSON bodies") {
  Loopback lb;
  auto c = lb.client();
  auto res = c.Get("/sessions/nope/question");
  REQUIRE(res);
  CHECK(res->status == 404);
  CHECK(json::parse(res->body).at("error").at("code") == "not-found");
  res = c.Get("/elsewhere");
  REQUIRE(res);
  CHECK(res->status == 404);
  CHECK(json::parse(res->body).at("error").at("code") == "not-found");
  res = c.Post("/sessions", "{", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
}

TEST_CASE("admin reload needs the token") {
  Loopback lb;
  auto c = lb.client();
  auto res = c.Post("/admin/reload-kb", "", "application/json");
  REQUIRE(res);
  CHECK(res->status == 401);
  res = c.Post("/admin/reload-kb", httplib::Headers{{"X-Admin-Token", "secret"}}, "", "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  res = c.Post("/admin/reload-kb", httplib::Headers{{"Authorization", "Bearer secret"}}, "", "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
}
