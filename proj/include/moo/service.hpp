#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "moo/session.hpp"

namespace httplib {
class Server;
}

namespace moo {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path data_dir = "moo-data";
  unsigned workers = 2;
};

/// HTTP/JSON front end under /api/v1. start() binds and serves on a
/// background thread; it throws io when the port cannot be bound.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  void start();
  int port() const noexcept { return port_; }
  /// Blocks until stop() is called from another thread.
  void wait();
  void stop();

  SessionManager& sessions() noexcept { return *sessions_; }

 private:
  void routes();

  ServiceConfig config_;
  std::unique_ptr<SessionManager> sessions_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::mutex join_mutex_;
  int port_ = 0;
};

/// HTTP status for an error code: 404 for not_found, 409 for
/// over_constrained and cancelled, 500 for io and internal, else 400.
int http_status(ErrorCode code) noexcept;

}  // namespace moo
