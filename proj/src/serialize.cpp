#include "moo/serialize.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace moo {

ExportFormat parse_export_format(const std::string& text) {
  if (text == "json") return ExportFormat::json;
  if (text == "csv") return ExportFormat::csv;
  throw Error(ErrorCode::invalid_argument, "unknown export format '" + text + "' (expected json or csv)");
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error(ErrorCode::internal, "format_number failed");
  return std::string(buf, ptr);
}

Json front_to_json(const Front& front) {
  Json doc;
  doc["problem"] = front.problem;
  doc["method"] = to_string(front.method);
  doc["eps"] = front.eps;
  doc["refinement_version"] = front.refinement_version;
  Json points = Json::array();
  for (const auto& p : front.points) {
    Json jp;
    jp["x"] = p.x;
    jp["g"] = p.g;
    if (p.lambda) jp["lambda"] = *p.lambda;
    if (p.direction) jp["direction"] = *p.direction;
    jp["boundary_kind"] = to_string(p.boundary_kind);
    if (p.eps != 0.0) jp["eps"] = p.eps;
    if (p.iterations != 0) jp["iterations"] = p.iterations;
    if (!p.weights.empty()) jp["weights"] = p.weights;
    points.push_back(std::move(jp));
  }
  doc["points"] = std::move(points);
  doc["created_at"] = front.created_at;
  doc["dims"] = front.dims;
  doc["objectives"] = front.num_objectives;
  doc["count"] = front.count;
  if (!front.errors.empty()) {
    Json errors = Json::array();
    for (const auto& e : front.errors)
      errors.push_back({{"index", e.index}, {"direction", e.direction}, {"code", e.code}, {"message", e.message}});
    doc["errors"] = std::move(errors);
  }
  return doc;
}

Front front_from_json(const Json& doc) {
  try {
    Front f;
    f.problem = doc.at("problem").get<std::string>();
    f.method = parse_front_method(doc.at("method").get<std::string>());
    f.eps = doc.at("eps").get<double>();
    f.refinement_version = doc.at("refinement_version").get<std::uint64_t>();
    for (const auto& jp : doc.at("points")) {
      FrontPoint p;
      p.x = jp.at("x").get<std::vector<double>>();
      p.g = jp.at("g").get<std::vector<double>>();
      if (jp.contains("lambda")) p.lambda = jp["lambda"].get<double>();
      if (jp.contains("direction")) p.direction = jp["direction"].get<std::vector<double>>();
      p.boundary_kind = parse_boundary_kind(jp.at("boundary_kind").get<std::string>());
      p.eps = jp.value("eps", 0.0);
      p.iterations = jp.value("iterations", 0);
      if (jp.contains("weights")) p.weights = jp["weights"].get<std::vector<std::vector<double>>>();
      f.points.push_back(std::move(p));
    }
    f.created_at = doc.at("created_at").get<std::string>();
    f.dims = doc.value("dims", f.points.empty() ? std::size_t{0} : f.points.front().x.size());
    f.num_objectives = doc.value("objectives", f.points.empty() ? std::size_t{0} : f.points.front().g.size());
    f.count = doc.value("count", f.points.size());
    if (doc.contains("errors"))
      for (const auto& je : doc["errors"])
        f.errors.push_back({je.at("index").get<std::size_t>(), je.at("direction").get<std::vector<double>>(),
                            je.at("code").get<std::string>(), je.at("message").get<std::string>()});
    return f;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("malformed front document: ") + e.what());
  }
}

Front import_front(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("front is not valid JSON: ") + e.what());
  }
  return front_from_json(doc);
}

namespace {

std::string front_csv(const Front& front) {
  std::string out;
  for (std::size_t d = 0; d < front.dims; ++d) out += "x_" + std::to_string(d + 1) + ",";
  for (std::size_t m = 0; m < front.num_objectives; ++m) out += "g_" + std::to_string(m + 1) + ",";
  out += "lambda,boundary_kind\n";
  for (const auto& p : front.points) {
    for (double v : p.x) out += format_number(v) + ",";
    for (double v : p.g) out += format_number(v) + ",";
    if (p.lambda) out += format_number(*p.lambda);
    out += ",";
    out += to_string(p.boundary_kind);
    out += "\n";
  }
  return out;
}

}  // namespace

std::string export_front(const Front& front, ExportFormat format) {
  switch (format) {
    case ExportFormat::json: return front_to_json(front).dump(2) + "\n";
    case ExportFormat::csv: return front_csv(front);
  }
  throw Error(ErrorCode::invalid_argument, "unknown export format");
}

Json goal_to_json(const GoalSpec& goal) {
  Json doc;
  doc["kind"] = to_string(goal.kind);
  if (goal.kind == GoalKind::distance) {
    doc["reference"] = goal.reference;
    doc["p"] = to_string(goal.norm);
  } else {
    doc["weights"] = goal.weights;
  }
  return doc;
}

GoalSpec goal_from_json(const Json& doc) {
  try {
    GoalSpec goal;
    goal.kind = parse_goal_kind(doc.at("kind").get<std::string>());
    if (goal.kind == GoalKind::distance) {
      goal.reference = doc.at("reference").get<std::vector<double>>();
      if (doc.contains("p")) {
        const auto& p = doc["p"];
        goal.norm = parse_norm(p.is_string() ? p.get<std::string>() : std::to_string(p.get<int>()));
      }
    } else {
      goal.weights = doc.at("weights").get<std::vector<double>>();
    }
    return goal;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("malformed goal: ") + e.what());
  }
}

Json solution_to_json(const ScalarSolution& s, const ProblemDefinition& problem) {
  Json doc;
  doc["problem"] = problem.name;
  doc["goal"] = goal_to_json(s.goal);
  doc["x"] = s.x;
  doc["g"] = s.g;
  doc["value"] = s.value;
  Json names = Json::array();
  for (const auto& o : problem.objectives) names.push_back({{"name", o.name}, {"unit", o.unit}});
  doc["objectives"] = std::move(names);
  Json diag;
  diag["grid_points"] = s.diagnostics.grid_points;
  diag["feasible_points"] = s.diagnostics.feasible_points;
  diag["refine_levels"] = s.diagnostics.refine_levels;
  diag["degenerate_product"] = s.diagnostics.degenerate_product;
  if (s.diagnostics.bisection_lambda) diag["bisection_lambda"] = *s.diagnostics.bisection_lambda;
  if (s.diagnostics.bisection_agrees) diag["bisection_agrees"] = *s.diagnostics.bisection_agrees;
  doc["diagnostics"] = std::move(diag);
  return doc;
}

Json utopia_to_json(const UtopiaPoint& u, const ProblemDefinition& problem) {
  Json doc;
  doc["values"] = u.values;
  Json units = Json::array();
  Json names = Json::array();
  for (const auto& o : problem.objectives) {
    units.push_back(o.unit);
    names.push_back(o.name);
  }
  doc["units"] = std::move(units);
  doc["names"] = std::move(names);
  doc["witnesses"] = u.witnesses;
  return doc;
}

Json grid_to_json(const GridSpec& grid) {
  Json axes = Json::array();
  for (const auto& a : grid.axes) {
    switch (a.kind) {
      case GridAxis::Kind::values: axes.push_back({{"values", a.values}}); break;
      case GridAxis::Kind::linear: axes.push_back({{"linear", {a.lo, a.hi, a.count}}}); break;
      case GridAxis::Kind::logarithmic:
        axes.push_back({{"log", {a.lo, a.hi, a.count}}, {"zero", a.include_zero}});
        break;
      case GridAxis::Kind::range: axes.push_back({{"range", {a.lo, a.hi, a.step}}}); break;
    }
  }
  return Json{{"axes", std::move(axes)}};
}

GridSpec grid_from_json(const Json& doc, const ProblemDefinition& problem) {
  try {
    const Json& axes = doc.is_object() ? doc.at("axes") : doc;
    if (!axes.is_array()) throw Error(ErrorCode::invalid_argument, "grid must be an array or {\"axes\": [...]}");
    if (axes.size() != problem.dims())
      throw Error(ErrorCode::dimension_mismatch, "grid must have one entry per resource dimension");
    GridSpec spec;
    for (std::size_t d = 0; d < axes.size(); ++d) {
      const auto& a = axes[d];
      if (a.is_number_integer()) {
        const auto n = a.get<long long>();
        if (n < 1) throw Error(ErrorCode::invalid_argument, "grid counts must be >= 1");
        spec.axes.push_back(GridAxis::linear(problem.lower[d], problem.upper[d], static_cast<std::size_t>(n)));
      } else if (a.contains("values")) {
        spec.axes.push_back(GridAxis::explicit_values(a["values"].get<std::vector<double>>()));
      } else if (a.contains("linear")) {
        const auto& v = a["linear"];
        spec.axes.push_back(GridAxis::linear(v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<std::size_t>()));
      } else if (a.contains("log")) {
        const auto& v = a["log"];
        spec.axes.push_back(GridAxis::logarithmic(v.at(0).get<double>(), v.at(1).get<double>(),
                                                  v.at(2).get<std::size_t>(), a.value("zero", false)));
      } else if (a.contains("range")) {
        const auto& v = a["range"];
        spec.axes.push_back(GridAxis::range(v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()));
      } else {
        throw Error(ErrorCode::invalid_argument, "unrecognized grid axis " + std::to_string(d));
      }
    }
    return spec;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("malformed grid: ") + e.what());
  }
}

}  // namespace moo
