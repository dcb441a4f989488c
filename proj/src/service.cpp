#include "moo/service.hpp"

#include <httplib.h>

namespace moo {

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::not_found: return 404;
    case ErrorCode::over_constrained:
    case ErrorCode::cancelled: return 409;
    case ErrorCode::io:
    case ErrorCode::internal: return 500;
    default: return 400;
  }
}

namespace {

void send_json(httplib::Response& res, const Json& doc, int status = 200) {
  res.status = status;
  res.set_content(doc.dump() + "\n", "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
  Json doc;
  doc["error"] = {{"code", code}, {"message", message}};
  send_json(res, doc, status);
}

Json body(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    return Json::parse(req.body);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::invalid_argument, std::string("request body is not valid JSON: ") + e.what());
  }
}

template <class Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, http_status(e.code()), to_string(e.code()), e.what());
    } catch (const Json::exception& e) {
      send_error(res, 400, "invalid_argument", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

}  // namespace

Service::Service(ServiceConfig config) : config_(std::move(config)) {}

Service::~Service() { stop(); }

void Service::routes() {
  auto& s = *server_;
  auto& m = *sessions_;
  const std::string api = "/api/v1";

  s.Get(api + "/problems", guarded([&m](const httplib::Request&, httplib::Response& res) {
          send_json(res, m.list_problems());
        }));

  s.Post(api + "/sessions", guarded([&m](const httplib::Request& req, httplib::Response& res) {
           const auto doc = body(req);
           if (!doc.contains("problem") || !doc["problem"].is_string())
             throw Error(ErrorCode::invalid_argument, "field 'problem' (string) is required");
           send_json(res, {{"session_id", m.create_session(doc["problem"].get<std::string>())}}, 201);
         }));

  s.Get(api + R"(/sessions/([\w-]+))", guarded([&m](const httplib::Request& req, httplib::Response& res) {
          send_json(res, m.session(req.matches[1]));
        }));

  s.Post(api + R"(/sessions/([\w-]+)/refine)", guarded([&m](const httplib::Request& req, httplib::Response& res) {
           const auto doc = body(req);
           if (!doc.contains("refinements") || !doc["refinements"].is_array())
             throw Error(ErrorCode::invalid_argument, "field 'refinements' (array) is required");
           std::vector<Refinement> refs;
           for (const auto& r : doc["refinements"]) refs.push_back(refinement_from_json(r));
           send_json(res, {{"refinement_version", m.refine(req.matches[1], refs)}});
         }));

  s.Post(api + R"(/sessions/([\w-]+)/rollback)", guarded([&m](const httplib::Request& req, httplib::Response& res) {
           const auto doc = body(req);
           if (!doc.contains("version") || !doc["version"].is_number_unsigned())
             throw Error(ErrorCode::invalid_argument, "field 'version' (nonnegative integer) is required");
           send_json(res, {{"refinement_version", m.rollback(req.matches[1], doc["version"].get<std::uint64_t>())}});
         }));

  s.Post(api + R"(/sessions/([\w-]+)/sample)", guarded([&m](const httplib::Request& req, httplib::Response& res) {
           send_json(res, {{"job_id", m.submit_sample(req.matches[1], body(req))}}, 202);
         }));

  s.Post(api + R"(/sessions/([\w-]+)/scalarize)", guarded([&m](const httplib::Request& req, httplib::Response& res) {
           send_json(res, m.scalarize(req.matches[1], body(req)));
         }));

  s.Get(api + R"(/sessions/([\w-]+)/utopia)", guarded([&m](const httplib::Request& req, httplib::Response& res) {
          send_json(res, m.utopia(req.matches[1]));
        }));

  s.Get(api + R"(/jobs/([\w-]+))", guarded([&m](const httplib::Request& req, httplib::Response& res) {
          send_json(res, m.job(req.matches[1]));
        }));

  s.Post(api + R"(/jobs/([\w-]+)/cancel)", guarded([&m](const httplib::Request& req, httplib::Response& res) {
           m.cancel_job(req.matches[1]);
           send_json(res, m.job(req.matches[1]));
         }));

  s.Get(api + R"(/fronts/([\w-]+))", guarded([&m](const httplib::Request& req, httplib::Response& res) {
          const auto format = parse_export_format(req.has_param("format") ? req.get_param_value("format") : "json");
          res.set_content(m.export_front(req.matches[1], format),
                          format == ExportFormat::json ? "application/json" : "text/csv");
        }));

  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    send_error(res, res.status, res.status == 404 ? "not_found" : "invalid_argument", httplib::status_message(res.status));
  });
}

void Service::start() {
  if (server_) throw Error(ErrorCode::invalid_argument, "service already started");
  if (config_.port < 0 || config_.port > 65535) throw Error(ErrorCode::invalid_argument, "port must be in [0, 65535]");
  try {
    sessions_ = std::make_unique<SessionManager>(config_.data_dir, config_.workers);
  } catch (const std::filesystem::filesystem_error& e) {
    throw Error(ErrorCode::io, std::string("data directory is not writable: ") + e.what());
  }
  server_ = std::make_unique<httplib::Server>();
  // httplib's default adds SO_REUSEPORT, which lets a second server share
  // the port silently.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
  });
  routes();
  if (config_.port == 0) {
    port_ = server_->bind_to_any_port(config_.host);
    if (port_ < 0) port_ = 0;
  } else {
    port_ = server_->bind_to_port(config_.host, config_.port) ? config_.port : 0;
  }
  if (port_ == 0) {
    server_.reset();
    sessions_.reset();
    throw Error(ErrorCode::io, "cannot bind " + config_.host + ":" + std::to_string(config_.port) + " (port busy?)");
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void Service::wait() {
  std::lock_guard lock(join_mutex_);
  if (thread_.joinable()) thread_.join();
}

void Service::stop() {
  if (server_) server_->stop();
  std::lock_guard lock(join_mutex_);
  if (thread_.joinable()) thread_.join();
}

}  // namespace moo
