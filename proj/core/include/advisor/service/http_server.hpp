#pragma once

#include <memory>
#include <ostream>
#include <string>

#include "advisor/service/service.hpp"

namespace advisor::service {

/// HTTP/1.1 binding of AdvisorService. One JSON log line per request goes to
/// `log` when it is non-null.
class HttpServer {
 public:
  HttpServer(AdvisorService& service, std::ostream* log = nullptr);
  ~HttpServer();

  /// Port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace advisor::service
