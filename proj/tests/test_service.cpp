#include <doctest.h>
#include <httplib.h>

#include <chrono>
#include <filesystem>
#include <random>
#include <thread>

#include "helpers.hpp"
#include "moo/service.hpp"

using namespace moo;
namespace fs = std::filesystem;

namespace {

struct Fixture {
  fs::path dir;
  std::unique_ptr<Service> service;
  std::unique_ptr<httplib::Client> client;

  Fixture() {
    std::random_device rd;
    dir = fs::temp_directory_path() / ("moo-service-" + std::to_string(rd()) + std::to_string(rd()));
    ServiceConfig cfg;
    cfg.port = 0;
    cfg.data_dir = dir;
    cfg.workers = 2;
    service = std::make_unique<Service>(cfg);
    service->start();
    client = std::make_unique<httplib::Client>("127.0.0.1", service->port());
    client->set_read_timeout(120, 0);
  }
  ~Fixture() {
    client.reset();
    service->stop();
    service.reset();
    std::error_code ec;
    fs::remove_all(dir, ec);
  }

  std::pair<int, Json> get(const std::string& path) {
    auto r = client->Get(path);
    REQUIRE(r);
    return {r->status, r->body.empty() ? Json() : Json::parse(r->body)};
  }
  std::pair<int, Json> post(const std::string& path, const std::string& body) {
    auto r = client->Post(path, body, "application/json");
    REQUIRE(r);
    return {r->status, Json::parse(r->body)};
  }
  std::pair<int, Json> post(const std::string& path, const Json& body) { return post(path, body.dump()); }

  std::string session(const std::string& problem) {
    auto [status, doc] = post("/api/v1/sessions", Json{{"problem", problem}});
    REQUIRE(status == 201);
    return doc["session_id"];
  }
  Json poll(const std::string& job) {
    for (int i = 0; i < 6000; ++i) {
      auto [status, doc] = get("/api/v1/jobs/" + job);
      REQUIRE(status == 200);
      if (doc["status"] != "queued" && doc["status"] != "running") return doc;
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    FAIL("job did not finish");
    return {};
  }
  Json sample(const std::string& sid, const Json& request) {
    auto [status, doc] = post("/api/v1/sessions/" + sid + "/sample", request);
    REQUIRE(status == 202);
    return poll(doc["job_id"]);
  }
};

Json small_grid() { return grid_to_json(testing::small_mimo_search().grid); }

}  // namespace

TEST_CASE("status mapping") {
  CHECK(http_status(ErrorCode::not_found) == 404);
  CHECK(http_status(ErrorCode::over_constrained) == 409);
  CHECK(http_status(ErrorCode::cancelled) == 409);
  CHECK(http_status(ErrorCode::io) == 500);
  CHECK(http_status(ErrorCode::internal) == 500);
  CHECK(http_status(ErrorCode::invalid_argument) == 400);
  CHECK(http_status(ErrorCode::dimension_mismatch) == 400);
}

TEST_CASE("problems and error bodies") {
  Fixture fx;
  auto [status, doc] = fx.get("/api/v1/problems");
  CHECK(status == 200);
  REQUIRE(doc.is_array());
  std::vector<std::string> names;
  for (const auto& p : doc) names.push_back(p["name"]);
  CHECK(names == std::vector<std::string>{"mimo_case_study", "toy_simplex"});
  CHECK(doc[0]["D"] == 3);
  CHECK(doc[0]["M"] == 3);
  CHECK(doc[0]["box"][0]["integral"] == true);

  auto [s1, bad] = fx.post("/api/v1/sessions", std::string("{not json"));
  CHECK(s1 == 400);
  CHECK(bad["error"]["code"] == "invalid_argument");
  CHECK(bad["error"]["message"].is_string());

  auto [s2, missing] = fx.get("/api/v1/sessions/s123");
  CHECK(s2 == 404);
  CHECK(missing["error"]["code"] == "not_found");

  auto [s3, unknown] = fx.post("/api/v1/sessions", Json{{"problem", "nope"}});
  CHECK(s3 == 404);

  auto [s4, route] = fx.get("/api/v1/nowhere");
  CHECK(s4 == 404);
  CHECK(route["error"]["code"] == "not_found");

  auto [s5, job] = fx.get("/api/v1/jobs/j0");
  CHECK(s5 == 404);
}

TEST_CASE("toy front over HTTP") {
  Fixture fx;
  const auto sid = fx.session("toy_simplex");
  const double eps = 1e-6;
  const auto job = fx.sample(sid, {{"method", "direction"}, {"count", 32}, {"eps", eps}});
  REQUIRE(job["status"] == "done");
  const auto& points = job["front"]["points"];
  REQUIRE(points.size() == 32);
  for (const auto& p : points) {
    const double s = p["g"][0].get<double>() + p["g"][1].get<double>();
    CHECK(s <= 1.0 + 1e-12);
    // lambda is within eps of the boundary, |v| = 1 before scaling by u = (1, 1)
    CHECK(s >= 1.0 - 2 * eps);
  }

  auto r = fx.client->Get("/api/v1/fronts/" + job["front_id"].get<std::string>() + "?format=csv");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(r->body.rfind("x_1,x_2,g_1,g_2,lambda,boundary_kind\n", 0) == 0);
  CHECK(std::count(r->body.begin(), r->body.end(), '\n') == 33);

  auto j = fx.client->Get("/api/v1/fronts/" + job["front_id"].get<std::string>());
  REQUIRE(j);
  CHECK(Json::parse(j->body) == job["front"]);
  auto again = fx.client->Get("/api/v1/fronts/" + job["front_id"].get<std::string>());
  CHECK(again->body == j->body);

  auto [s, err] = fx.get("/api/v1/fronts/" + job["front_id"].get<std::string>() + "?format=xml");
  CHECK(s == 400);
  auto [s2, err2] = fx.get("/api/v1/fronts/fdeadbeef");
  CHECK(s2 == 404);
}

TEST_CASE("concurrent sessions are independent") {
  Fixture fx;
  const auto a = fx.session("toy_simplex");
  const auto b = fx.session("toy_simplex");
  auto [sr, v] = fx.post("/api/v1/sessions/" + b + "/refine",
                         Json{{"refinements", {{{"kind", "floor"}, {"objective", 1}, {"value", 0.6}}}}});
  REQUIRE(sr == 200);
  const Json req{{"method", "direction"}, {"count", 16}};
  auto [s1, ja] = fx.post("/api/v1/sessions/" + a + "/sample", req);
  auto [s2, jb] = fx.post("/api/v1/sessions/" + b + "/sample", req);
  REQUIRE(s1 == 202);
  REQUIRE(s2 == 202);
  const auto da = fx.poll(ja["job_id"]);
  const auto db = fx.poll(jb["job_id"]);
  REQUIRE(da["status"] == "done");
  REQUIRE(db["status"] == "done");
  CHECK(da["front_id"] != db["front_id"]);
  CHECK(da["front"]["refinement_version"] == 0);
  CHECK(db["front"]["refinement_version"] == 1);
  bool a_below = false;
  for (const auto& p : da["front"]["points"]) a_below = a_below || p["g"][1].get<double>() < 0.6;
  CHECK(a_below);
  for (const auto& p : db["front"]["points"]) CHECK(p["g"][1].get<double>() >= 0.6);
}

TEST_CASE("over-constrained refinement returns 409") {
  Fixture fx;
  const auto sid = fx.session("toy_simplex");
  auto [s, err] = fx.post("/api/v1/sessions/" + sid + "/refine",
                          Json{{"refinements", {{{"kind", "floor"}, {"objective", 0}, {"value", 1.01}}}}});
  CHECK(s == 409);
  CHECK(err["error"]["code"] == "over_constrained");
  auto [s2, doc] = fx.get("/api/v1/sessions/" + sid);
  CHECK(s2 == 200);
  CHECK(doc["refinement_version"] == 0);
  CHECK(doc["versions"].size() == 1);

  auto [s3, bad] = fx.post("/api/v1/sessions/" + sid + "/refine",
                           Json{{"refinements", {{{"kind", "floor"}, {"objective", 0}, {"value", -1}}}}});
  CHECK(s3 == 400);
  auto [s4, missing] = fx.post("/api/v1/sessions/" + sid + "/refine", Json::object());
  CHECK(s4 == 400);
}

TEST_CASE("refinement lowers lambda along every direction") {
  Fixture fx;
  const auto sid = fx.session("mimo_case_study");
  const Json req{{"method", "direction"}, {"count", 8}, {"eps", 1e-6}, {"grid", small_grid()}, {"refine_levels", 4}};
  const auto j0 = fx.sample(sid, req);
  REQUIRE(j0["status"] == "done");
  auto [s, v] = fx.post("/api/v1/sessions/" + sid + "/refine",
                        Json{{"refinements", {{{"kind", "floor"}, {"objective", 2}, {"value", 4e6}}}}});
  REQUIRE(s == 200);
  CHECK(v["refinement_version"] == 1);
  const auto j1 = fx.sample(sid, req);
  REQUIRE(j1["status"] == "done");

  std::map<std::vector<double>, double> before;
  for (const auto& p : j0["front"]["points"])
    if (p.contains("lambda")) before[p["direction"].get<std::vector<double>>()] = p["lambda"];
  std::size_t compared = 0;
  for (const auto& p : j1["front"]["points"]) {
    if (!p.contains("lambda")) continue;
    const auto it = before.find(p["direction"].get<std::vector<double>>());
    if (it == before.end()) continue;
    CHECK(p["lambda"].get<double>() <= it->second + 1e-6);
    ++compared;
  }
  CHECK(compared > 0);
}

TEST_CASE("utopia, scalarize and rollback") {
  Fixture fx;
  const auto sid = fx.session("toy_simplex");
  auto [s1, u] = fx.get("/api/v1/sessions/" + sid + "/utopia");
  CHECK(s1 == 200);
  CHECK(u["values"][0].get<double>() == doctest::Approx(1.0));
  CHECK(u["names"].size() == 2);

  auto [s2, sol] = fx.post("/api/v1/sessions/" + sid + "/scalarize", Json{{"kind", "chebyshev"}, {"weights", "utopia"}});
  CHECK(s2 == 200);
  CHECK(sol["g"][0].get<double>() == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(sol["goal"]["kind"] == "chebyshev");

  auto [s3, bad] = fx.post("/api/v1/sessions/" + sid + "/scalarize", Json{{"kind", "sum"}, {"weights", {1.0}}});
  CHECK(s3 == 400);

  fx.post("/api/v1/sessions/" + sid + "/refine",
          Json{{"refinements", {{{"kind", "bounds"}, {"dimension", 0}, {"upper", 0.3}}}}});
  auto [s4, u1] = fx.get("/api/v1/sessions/" + sid + "/utopia");
  CHECK(u1["values"][0].get<double>() == doctest::Approx(0.3));
  CHECK(u1["refinement_version"] == 1);

  auto [s5, rb] = fx.post("/api/v1/sessions/" + sid + "/rollback", Json{{"version", 0}});
  CHECK(s5 == 200);
  CHECK(rb["refinement_version"] == 0);
  auto [s6, u0] = fx.get("/api/v1/sessions/" + sid + "/utopia");
  CHECK(u0["values"][0].get<double>() == doctest::Approx(1.0));
  auto [s7, none] = fx.post("/api/v1/sessions/" + sid + "/rollback", Json{{"version", 5}});
  CHECK(s7 == 404);
}

TEST_CASE("cancel a running job") {
  Fixture fx;
  const auto sid = fx.session("mimo_case_study");
  auto [s, j] = fx.post("/api/v1/sessions/" + sid + "/sample",
                        Json{{"method", "direction"}, {"count", 20000}, {"eps", 1e-9}, {"grid", small_grid()}, {"refine_levels", 8}});
  REQUIRE(s == 202);
  auto [sc, c] = fx.post("/api/v1/jobs/" + j["job_id"].get<std::string>() + "/cancel", std::string("{}"));
  CHECK(sc == 200);
  const auto done = fx.poll(j["job_id"]);
  CHECK(done["status"] == "cancelled");
}

TEST_CASE("a busy port is reported") {
  Fixture fx;
  ServiceConfig cfg;
  cfg.port = fx.service->port();
  cfg.data_dir = fx.dir / "other";
  Service second(cfg);
  try {
    second.start();
    FAIL("expected the bind to fail");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
}
