#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "moo/front.hpp"
#include "moo/problems.hpp"
#include "moo/serialize.hpp"

using namespace moo;

namespace {

Front toy_front() {
  const auto b = builtin("toy_simplex");
  const SearchIndex index(b.problem, b.search);
  SampleOptions opts;
  opts.count = 7;
  auto f = sample_front(index, opts);
  f.problem = "toy_simplex";
  f.refinement_version = 3;
  f.created_at = "2024-01-01T00:00:00Z";
  return f;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::size_t columns(const std::string& line) { return std::count(line.begin(), line.end(), ',') + 1; }

}  // namespace

TEST_CASE("format_number round-trips") {
  for (double v : {0.0, 1.0, 0.1, 1.0 / 3.0, 6.02e23, 5e-324, -2.5, 123456789.125}) {
    const auto s = format_number(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("front JSON round trip is lossless") {
  const auto f = toy_front();
  REQUIRE(!f.points.empty());
  const auto text = export_front(f, ExportFormat::json);
  const auto back = import_front(text);
  CHECK(back == f);
  CHECK(export_front(back, ExportFormat::json) == text);
}

TEST_CASE("front JSON keeps its field order") {
  const auto doc = front_to_json(toy_front());
  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  REQUIRE(keys.size() >= 6);
  CHECK(std::vector<std::string>(keys.begin(), keys.begin() + 6) ==
        std::vector<std::string>{"problem", "method", "eps", "refinement_version", "points", "created_at"});
  const auto& p = doc["points"][0];
  CHECK(p.begin().key() == "x");
  CHECK(p.contains("lambda"));
  CHECK(p.contains("direction"));
}

TEST_CASE("CSV of a three-objective MIMO front") {
  const SearchIndex index(mimo::as_problem({}), testing::small_mimo_search());
  auto f = grid_sample(index);
  const auto csv = export_front(f, ExportFormat::csv);
  const auto rows = lines(csv);
  REQUIRE(rows.size() == f.points.size() + 1);
  CHECK(rows[0] == "x_1,x_2,x_3,g_1,g_2,g_3,lambda,boundary_kind");
  for (const auto& r : rows) CHECK(columns(r) == 8);
  // grid points carry no lambda
  CHECK(rows[1].find(",,") != std::string::npos);
}

TEST_CASE("CSV of an empty front is just the header") {
  Front f;
  f.dims = 2;
  f.num_objectives = 2;
  CHECK(export_front(f, ExportFormat::csv) == "x_1,x_2,g_1,g_2,lambda,boundary_kind\n");
}

TEST_CASE("export format parsing") {
  CHECK(parse_export_format("json") == ExportFormat::json);
  CHECK(parse_export_format("csv") == ExportFormat::csv);
  try {
    parse_export_format("xml");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
}

TEST_CASE("malformed front documents are rejected") {
  for (const char* text : {"not json", "{}", R"({"problem":"x","method":"bogus","eps":0,"refinement_version":0,"points":[],"created_at":""})"}) {
    try {
      import_front(text);
      FAIL("expected an error for " << text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::invalid_argument);
    }
  }
}

TEST_CASE("goal JSON forms") {
  const auto w = GoalSpec::weighted(GoalKind::chebyshev, {1, 2, 3});
  CHECK(goal_to_json(w).dump() == R"({"kind":"chebyshev","weights":[1.0,2.0,3.0]})");
  const auto back = goal_from_json(goal_to_json(w));
  CHECK(back.kind == GoalKind::chebyshev);
  CHECK(back.weights == std::vector<double>{1, 2, 3});

  const auto d = goal_from_json(Json::parse(R"({"kind":"distance","reference":[1,1],"p":1})"));
  CHECK(d.kind == GoalKind::distance);
  CHECK(d.norm == Norm::l1);
  CHECK(d.reference == std::vector<double>{1, 1});
  CHECK(goal_from_json(Json::parse(R"({"kind":"distance","reference":[1,1],"p":"inf"})")).norm == Norm::linf);

  CHECK_THROWS_AS(goal_from_json(Json::parse(R"({"kind":"sum"})")), Error);
  CHECK_THROWS_AS(goal_from_json(Json::parse(R"({"kind":"median","weights":[1]})")), Error);
}

TEST_CASE("grid JSON forms") {
  const auto toy = toy_simplex();
  const auto counts = grid_from_json(Json::parse("[3, 5]"), toy);
  REQUIRE(counts.axes.size() == 2);
  CHECK(resolve(counts, toy).axes()[0] == std::vector<double>{0, 0.5, 1});
  CHECK(resolve(counts, toy).axes()[1].size() == 5);

  const auto objs = grid_from_json(
      Json::parse(R"({"axes":[{"values":[0,0.25]},{"log":[0.01,1,3],"zero":true}]})"), toy);
  const auto r = resolve(objs, toy);
  CHECK(r.axes()[0] == std::vector<double>{0, 0.25});
  REQUIRE(r.axes()[1].size() == 4);
  CHECK(r.axes()[1][0] == 0.0);
  CHECK(r.axes()[1][3] == doctest::Approx(1.0));

  const auto again = grid_from_json(grid_to_json(objs), toy);
  CHECK(resolve(again, toy).axes() == r.axes());

  CHECK_THROWS_AS(grid_from_json(Json::parse("[3]"), toy), Error);
  CHECK_THROWS_AS(grid_from_json(Json::parse("[0, 3]"), toy), Error);
  CHECK_THROWS_AS(grid_from_json(Json::parse(R"([{"spiral":1},3])"), toy), Error);
}
