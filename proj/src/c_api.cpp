#include "moo.h"

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "moo/acceptance.hpp"
#include "moo/problems.hpp"
#include "moo/scalar.hpp"
#include "moo/serialize.hpp"
#include "moo/service.hpp"
#include "moo/session.hpp"

struct moo_problem {
  moo::BuiltinProblem base;
  mutable std::mutex mutex;
  mutable std::map<std::string, std::shared_ptr<const moo::SearchIndex>> indices;
};

struct moo_front {
  moo::Front front;
};

struct moo_server {
  std::unique_ptr<moo::Service> service;
};

namespace {

thread_local std::string last_error;

moo_status status_of(moo::ErrorCode code) {
  return static_cast<moo_status>(static_cast<int>(code) + 1);
}

template <class Fn>
moo_status guard(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return MOO_OK;
  } catch (const moo::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const moo::Json::exception& e) {
    last_error = e.what();
    return MOO_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MOO_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MOO_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw moo::Error(moo::ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

moo::Json parse_request(const char* text) {
  if (!text || !*text) return moo::Json::object();
  try {
    auto doc = moo::Json::parse(text);
    if (!doc.is_object()) throw moo::Error(moo::ErrorCode::invalid_argument, "request must be a JSON object");
    return doc;
  } catch (const moo::Json::parse_error& e) {
    throw moo::Error(moo::ErrorCode::invalid_argument, std::string("request is not valid JSON: ") + e.what());
  }
}

std::shared_ptr<const moo::SearchIndex> index_for(const moo_problem& p, const moo::Json& request) {
  const auto search = moo::search_from_request(p.base, request);
  const auto key = moo::grid_to_json(search.grid).dump() + "|" + std::to_string(search.refine_levels);
  std::lock_guard lock(p.mutex);
  if (auto it = p.indices.find(key); it != p.indices.end()) return it->second;
  auto index = std::make_shared<const moo::SearchIndex>(p.base.problem, search);
  if (p.indices.size() >= 2) p.indices.clear();
  p.indices[key] = index;
  return index;
}

}  // namespace

extern "C" {

const char* moo_version(void) { return "0.1.0"; }

const char* moo_status_name(moo_status status) {
  if (status == MOO_OK) return "ok";
  if (status < MOO_ERR_INVALID_ARGUMENT || status > MOO_ERR_INTERNAL) return "unknown";
  return moo::to_string(static_cast<moo::ErrorCode>(static_cast<int>(status) - 1));
}

const char* moo_last_error(void) { return last_error.c_str(); }

void moo_string_free(char* s) { std::free(s); }

moo_status moo_problems_json(char** out) {
  return guard([&] {
    require(out, "out");
    const auto list = moo::describe_problems();
    *out = dup(list.dump(2) + "\n");
  });
}

moo_status moo_problem_open(const char* name, const char* params_path, moo_problem** out) {
  return guard([&] {
    require(name, "name");
    require(out, "out");
    std::optional<moo::mimo::Params> params;
    if (params_path && *params_path) {
      if (std::string(name) != "mimo_case_study")
        throw moo::Error(moo::ErrorCode::invalid_argument, "a params file applies to mimo_case_study only");
      params = moo::mimo::load_params(params_path);
    }
    auto p = std::make_unique<moo_problem>();
    p->base = moo::builtin(name, params);
    *out = p.release();
  });
}

void moo_problem_close(moo_problem* problem) { delete problem; }

moo_status moo_problem_info_json(const moo_problem* problem, char** out) {
  return guard([&] {
    require(problem, "problem");
    require(out, "out");
    const auto& p = problem->base.problem;
    moo::Json doc;
    doc["name"] = p.name;
    doc["D"] = p.dims();
    doc["M"] = p.num_objectives();
    moo::Json vars = moo::Json::array();
    for (std::size_t d = 0; d < p.dims(); ++d)
      vars.push_back({{"name", d < p.variables.size() ? p.variables[d] : "x" + std::to_string(d + 1)}, {"lower", p.lower[d]}, {"upper", p.upper[d]},
                      {"integral", static_cast<bool>(p.integral[d])}});
    doc["variables"] = vars;
    moo::Json objectives = moo::Json::array();
    for (const auto& o : p.objectives) objectives.push_back({{"name", o.name}, {"unit", o.unit}});
    doc["objectives"] = objectives;
    moo::Json constraints = moo::Json::array();
    for (const auto& c : p.constraints) constraints.push_back(c.name);
    doc["constraints"] = constraints;
    doc["search"] = {{"grid", moo::grid_to_json(problem->base.search.grid)},
                     {"refine_levels", problem->base.search.refine_levels}};
    *out = dup(doc.dump(2) + "\n");
  });
}

moo_status moo_utopia_json(const moo_problem* problem, const char* request, char** out) {
  return guard([&] {
    require(problem, "problem");
    require(out, "out");
    const auto index = index_for(*problem, parse_request(request));
    *out = dup(moo::utopia_to_json(moo::utopia(*index), problem->base.problem).dump(2) + "\n");
  });
}

moo_status moo_sample(const moo_problem* problem, const char* request, moo_front** out) {
  return guard([&] {
    require(problem, "problem");
    require(out, "out");
    const auto req = parse_request(request);
    const auto method = moo::parse_front_method(req.value("method", std::string("direction")));
    if (method == moo::FrontMethod::scalarization)
      throw moo::Error(moo::ErrorCode::invalid_argument, "sample method must be grid or direction");
    const auto index = index_for(*problem, req);
    auto f = std::make_unique<moo_front>();
    if (method == moo::FrontMethod::grid) {
      f->front = moo::grid_sample(*index);
    } else {
      moo::SampleOptions opts;
      opts.count = req.value("count", std::size_t{32});
      opts.eps = req.value("eps", 1e-6);
      opts.threads = req.value("threads", 0u);
      if (opts.count == 0) throw moo::Error(moo::ErrorCode::invalid_argument, "count must be >= 1");
      f->front = moo::sample_front(*index, opts);
    }
    f->front.created_at = req.contains("created_at") ? req["created_at"].get<std::string>() : moo::utc_now();
    *out = f.release();
  });
}

size_t moo_front_size(const moo_front* front) { return front ? front->front.points.size() : 0; }

moo_status moo_front_export(const moo_front* front, const char* format, char** out) {
  return guard([&] {
    require(front, "front");
    require(format, "format");
    require(out, "out");
    *out = dup(moo::export_front(front->front, moo::parse_export_format(format)));
  });
}

moo_status moo_front_import(const char* json, moo_front** out) {
  return guard([&] {
    require(json, "json");
    require(out, "out");
    auto f = std::make_unique<moo_front>();
    f->front = moo::import_front(json);
    *out = f.release();
  });
}

void moo_front_free(moo_front* front) { delete front; }

moo_status moo_scalarize(const moo_problem* problem, const char* request, char** out) {
  return guard([&] {
    require(problem, "problem");
    require(out, "out");
    const auto req = parse_request(request);
    const auto index = index_for(*problem, req);
    const auto goal = moo::goal_from_request(*index, req);
    const auto sol = moo::solve_scalarized(*index, goal, index->refine_levels());
    *out = dup(moo::solution_to_json(sol, problem->base.problem).dump(2) + "\n");
  });
}

moo_status moo_server_start(const char* host, int port, const char* data_dir, moo_server** out) {
  return guard([&] {
    require(out, "out");
    moo::ServiceConfig config;
    if (host && *host) config.host = host;
    config.port = port;
    if (data_dir && *data_dir) config.data_dir = data_dir;
    auto s = std::make_unique<moo_server>();
    s->service = std::make_unique<moo::Service>(config);
    s->service->start();
    *out = s.release();
  });
}

int moo_server_port(const moo_server* server) { return server ? server->service->port() : 0; }

void moo_server_wait(moo_server* server) {
  if (server) server->service->wait();
}

void moo_server_stop(moo_server* server) {
  if (server) server->service->stop();
}

void moo_server_free(moo_server* server) { delete server; }

moo_status moo_verify(const char* only, unsigned threads, moo_verify_callback callback, void* user, int* failures) {
  return guard([&] {
    moo::AcceptanceOptions options;
    options.threads = threads == 0 ? 1 : threads;
    if (only && *only) {
      std::stringstream ss(only);
      std::string id;
      while (std::getline(ss, id, ','))
        if (!id.empty()) options.only.push_back(id);
    }
    int failed = 0;
    moo::run_acceptance(options, [&](const moo::CriterionResult& r) {
      failed += !r.passed;
      if (callback) callback(r.id.c_str(), r.passed ? 1 : 0, moo::format_result(r).c_str(), user);
    });
    if (failures) *failures = failed;
  });
}

}  // extern "C"
