#include "moo/scalar.hpp"

#include <algorithm>
#include <cmath>

#include "moo/parallel.hpp"

namespace moo {

namespace {

Score goal_score(const GoalSpec& goal, std::span<const double> g) {
  if (goal.kind == GoalKind::product) {
    const auto nonzero = std::count_if(g.begin(), g.end(), [](double v) { return v != 0.0; });
    return {static_cast<double>(nonzero), eval_goal(goal, g)};
  }
  return {eval_goal(goal, g), 0.0};
}

ScalarSolution finish(const ProblemDefinition& problem, const GoalSpec& goal, LocalPoint best,
                      std::vector<double> steps, int refine_levels, ScalarDiagnostics diag) {
  if (refine_levels > 0) {
    LocalSearch search;
    search.score = [&](std::span<const double> g) { return goal_score(goal, g); };
    best = refine_local(problem, std::move(best), std::move(steps), refine_levels, search);
  }
  ScalarSolution sol;
  sol.value = eval_goal(goal, best.g);
  sol.x = std::move(best.x);
  sol.g = std::move(best.g);
  sol.goal = goal;
  diag.refine_levels = refine_levels;
  diag.degenerate_product = goal.kind == GoalKind::product && sol.value == 0.0;
  sol.diagnostics = diag;
  return sol;
}

}  // namespace

ScalarSolution solve_scalarized(const SearchIndex& index, const GoalSpec& goal, int refine_levels,
                                double cross_check_eps) {
  goal.validate(index.num_objectives());
  if (refine_levels < 0) throw Error(ErrorCode::invalid_argument, "refine_levels must be >= 0");
  std::size_t arg = 0;
  Score best = goal_score(goal, index.g(0));
  for (std::size_t i = 1; i < index.size(); ++i) {
    const Score s = goal_score(goal, index.g(i));
    if (s > best) {
      best = s;
      arg = i;
    }
  }
  ScalarDiagnostics diag;
  diag.grid_points = index.grid().size();
  diag.feasible_points = index.size();
  LocalPoint start{{index.x(arg).begin(), index.x(arg).end()}, {index.g(arg).begin(), index.g(arg).end()}, best};
  auto sol = finish(index.problem(), goal, std::move(start), index.initial_steps(index.x(arg)), refine_levels, diag);

  if (goal.kind == GoalKind::chebyshev) {
    const auto u = utopia(index).values;
    double ratio = INFINITY;
    for (std::size_t m = 0; m < u.size(); ++m) ratio = std::min(ratio, u[m] / goal.weights[m]);
    try {
      const auto p = bisect_ray(index, goal.weights, cross_check_eps, (1.0 + kLambdaMaxMargin) * ratio);
      sol.diagnostics.bisection_lambda = p.lambda;
      sol.diagnostics.bisection_agrees = std::abs(*p.lambda - sol.value) <= cross_check_eps;
    } catch (const Error&) {
      sol.diagnostics.bisection_agrees = false;
    }
  }
  return sol;
}

ScalarSolution solve_scalarized(const ProblemDefinition& problem, const GoalSpec& goal, const SearchSpec& search,
                                int refine_levels, double cross_check_eps) {
  if (goal.kind == GoalKind::chebyshev) {
    SearchSpec s = search;
    s.refine_levels = refine_levels;
    return solve_scalarized(SearchIndex(problem, s), goal, refine_levels, cross_check_eps);
  }
  goal.validate(problem.num_objectives());
  if (refine_levels < 0) throw Error(ErrorCode::invalid_argument, "refine_levels must be >= 0");
  const auto grid = resolve(search.grid, problem);
  if (grid.size() == 0) throw Error(ErrorCode::empty_grid, "search grid for " + problem.name + " is empty");

  std::vector<double> x(problem.dims());
  std::vector<double> g(problem.num_objectives());
  std::optional<LocalPoint> best;
  ScalarDiagnostics diag;
  diag.grid_points = grid.size();
  for (std::uint64_t i = 0; i < grid.size(); ++i) {
    grid.point(i, x);
    if (!problem.feasible(x)) continue;
    ++diag.feasible_points;
    problem.evaluate(x, g);
    const Score s = goal_score(goal, g);
    if (!best || s > best->score) best = LocalPoint{x, g, s};
  }
  if (!best) throw Error(ErrorCode::all_infeasible, "no point of the search grid is feasible for " + problem.name);
  std::vector<double> steps(problem.dims());
  for (std::size_t d = 0; d < problem.dims(); ++d) {
    steps[d] = grid.spacing(d, best->x[d]);
    if (problem.integral[d]) steps[d] = std::max(steps[d] > 0 ? 1.0 : 0.0, std::round(steps[d]));
  }
  return finish(problem, goal, std::move(*best), std::move(steps), refine_levels, diag);
}

Front scalarize_sweep(const SearchIndex& index, GoalKind kind, const std::vector<std::vector<double>>& weight_grid,
                      int refine_levels, unsigned threads) {
  if (kind == GoalKind::distance)
    throw Error(ErrorCode::invalid_argument, "scalarize_sweep: distance goals carry no weights");
  for (const auto& w : weight_grid) {
    double total = 0.0;
    for (double c : w) total += c;
    if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::invalid_argument, "scalarize_sweep: weights must lie on the simplex");
  }
  std::vector<ScalarSolution> solutions(weight_grid.size());
  parallel_for(weight_grid.size(), threads == 0 ? default_threads() : threads, [&](std::size_t i) {
    solutions[i] = solve_scalarized(index, GoalSpec::weighted(kind, weight_grid[i]), refine_levels);
  });

  Front front;
  front.problem = index.problem().name;
  front.method = FrontMethod::scalarization;
  front.count = weight_grid.size();
  front.dims = index.dims();
  front.num_objectives = index.num_objectives();
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    auto it = std::find_if(front.points.begin(), front.points.end(),
                           [&](const FrontPoint& p) { return p.g == solutions[i].g; });
    if (it != front.points.end()) {
      it->weights.push_back(weight_grid[i]);
      continue;
    }
    FrontPoint p;
    p.x = solutions[i].x;
    p.g = solutions[i].g;
    p.boundary_kind = BoundaryKind::weak;
    p.weights.push_back(weight_grid[i]);
    front.points.push_back(std::move(p));
  }
  for (auto& p : front.points) {
    bool dominated = false;
    for (std::size_t c = 0; c < index.size() && !dominated; ++c) dominated = dominates(index.g(c), p.g);
    for (const auto& q : front.points)
      if (!dominated && dominates(q.g, p.g)) dominated = true;
    if (!dominated) p.boundary_kind = BoundaryKind::strong_certified;
  }
  return front;
}

std::vector<std::vector<double>> simplex_weights(std::size_t m, std::size_t divisions) {
  if (divisions == 0) throw Error(ErrorCode::invalid_argument, "simplex_weights: divisions must be >= 1");
  std::vector<std::vector<double>> out;
  if (m == 2) {
    for (std::size_t i = 0; i < divisions; ++i) {
      const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(divisions);
      out.push_back({t, 1.0 - t});
    }
  } else if (m == 3) {
    const double n = static_cast<double>(divisions) + 1.5;
    for (std::size_t i = 0; i <= divisions; ++i)
      for (std::size_t j = 0; i + j <= divisions; ++j) {
        const double a = (static_cast<double>(i) + 0.5) / n;
        const double b = (static_cast<double>(j) + 0.5) / n;
        out.push_back({a, b, 1.0 - a - b});
      }
  } else {
    throw Error(ErrorCode::unsupported, "simplex_weights: only 2 or 3 objectives are supported");
  }
  return out;
}

}  // namespace moo
