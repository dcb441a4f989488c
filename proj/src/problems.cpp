#include "moo/problems.hpp"

#include <algorithm>

namespace moo {

std::vector<std::string> builtin_names() { return {"mimo_case_study", "toy_simplex"}; }

ProblemDefinition toy_simplex() {
  ProblemDefinition p;
  p.name = "toy_simplex";
  p.variables = {"x1", "x2"};
  p.lower = {0, 0};
  p.upper = {1, 1};
  p.integral = {false, false};
  p.constraints.push_back({"x1 + x2 <= 1", [](std::span<const double> x) { return x[0] + x[1] <= 1.0; }});
  p.objectives = {{"g1", "unit"}, {"g2", "unit"}};
  p.evaluator = [](std::span<const double> x, std::span<double> g) {
    g[0] = x[0];
    g[1] = x[1];
  };
  p.origin = ResourcePoint{0, 0};
  p.validate();
  return p;
}

SearchSpec toy_simplex_search() {
  SearchSpec s;
  s.grid.axes = {GridAxis::linear(0, 1, 101), GridAxis::linear(0, 1, 101)};
  s.refine_levels = 40;
  return s;
}

BuiltinProblem builtin(const std::string& name, const std::optional<mimo::Params>& params) {
  if (name == "toy_simplex") return {toy_simplex(), toy_simplex_search()};
  if (name == "mimo_case_study") {
    const auto p = params.value_or(mimo::Params{});
    return {mimo::as_problem(p), mimo::default_search(p)};
  }
  throw Error(ErrorCode::not_found, "unknown problem '" + name + "'");
}

ProblemDefinition restrict_objectives(const ProblemDefinition& problem, const std::vector<std::size_t>& keep) {
  if (keep.empty()) throw Error(ErrorCode::invalid_argument, "restrict_objectives: nothing to keep");
  for (std::size_t k : keep)
    if (k >= problem.num_objectives()) throw Error(ErrorCode::invalid_argument, "restrict_objectives: index out of range");
  ProblemDefinition out = problem;
  out.objectives.clear();
  std::string suffix;
  for (std::size_t k : keep) {
    out.objectives.push_back(problem.objectives[k]);
    suffix += (suffix.empty() ? "" : ",") + problem.objectives[k].name;
  }
  out.name = problem.name + "[" + suffix + "]";
  out.evaluator = [full = problem.evaluator, keep, m = problem.num_objectives()](std::span<const double> x,
                                                                              std::span<double> g) {
    std::vector<double> buffer(m);
    full(x, buffer);
    for (std::size_t i = 0; i < keep.size(); ++i) g[i] = buffer[keep[i]];
  };
  return out;
}

}  // namespace moo
