#include "advisor/service/http_server.hpp"

#include <chrono>
#include <mutex>

#include "httplib.h"
#include "json_codec.hpp"

namespace advisor::service {

class HttpServer::Impl {
 public:
  Impl(AdvisorService& service, std::ostream* log) : service_(service), log_(log) {
    using httplib::Request;
    using httplib::Response;
    auto send = [](Response& res, const ApiResponse& api) {
      res.status = api.status;
      res.set_content(api.body, api.content_type);
    };
    server_.Post("/sessions", [this, send](const Request& req, Response& res) {
      send(res, service_.create_session(req.body));
    });
    server_.Get(R"(/sessions/([^/]+)/question)", [this, send](const Request& req, Response& res) {
      send(res, service_.get_question(req.matches[1].str()));
    });
    server_.Post(R"(/sessions/([^/]+)/answer)", [this, send](const Request& req, Response& res) {
      send(res, service_.submit_answer(req.matches[1].str(), req.body));
    });
    server_.Get(R"(/sessions/([^/]+)/report)", [this, send](const Request& req, Response& res) {
      const bool raw = req.has_param("format") && req.get_param_value("format") == "raw";
      send(res, service_.get_report(req.matches[1].str(), raw));
    });
    server_.Post("/admin/reload-kb", [this, send](const Request& req, Response& res) {
      auto token = req.get_header_value("X-Admin-Token");
      const auto auth = req.get_header_value("Authorization");
      if (token.empty() && auth.rfind("Bearer ", 0) == 0) token = auth.substr(7);
      send(res, service_.reload_kb(token));
    });
    server_.set_error_handler([](const Request&, Response& res) {
      if (!res.body.empty()) return;
      const std::string code = res.status == 404 ? "not-found" : "bad-request";
      res.set_content(json{{"error", {{"code", code}, {"message", "no such endpoint"}}}}.dump(),
                      "application/json");
    });
    server_.set_pre_routing_handler([](const Request& req, Response&) {
      req_start(req) = std::chrono::steady_clock::now();
      return httplib::Server::HandlerResponse::Unhandled;
    });
    server_.set_logger([this](const Request& req, const Response& res) {
      if (!log_) return;
      const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - req_start(req));
      json line = {{"ts", iso8601(std::chrono::time_point_cast<std::chrono::milliseconds>(
                             std::chrono::system_clock::now()))},
                   {"method", req.method},
                   {"path", req.path},
                   {"status", res.status},
                   {"ms", ms.count()}};
      std::lock_guard lock(log_mutex_);
      *log_ << line.dump() << '\n' << std::flush;
    });
  }

  static std::chrono::steady_clock::time_point& req_start(const httplib::Request&) {
    thread_local std::chrono::steady_clock::time_point start;
    return start;
  }

  AdvisorService& service_;
  std::ostream* log_;
  std::mutex log_mutex_;
  httplib::Server server_;
};

HttpServer::HttpServer(AdvisorService& service, std::ostream* log)
    : impl_(std::make_unique<Impl>(service, log)) {}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server_.bind_to_any_port(host);
  return impl_->server_.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen_after_bind() { return impl_->server_.listen_after_bind(); }

void HttpServer::stop() { impl_->server_.stop(); }

void HttpServer::wait_until_ready() const { impl_->server_.wait_until_ready(); }

}  // namespace advisor::service
