#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "moo/core.hpp"
#include "moo/front.hpp"
#include "moo/search.hpp"

namespace moo {

struct ScalarDiagnostics {
  std::uint64_t grid_points = 0;
  std::size_t feasible_points = 0;
  int refine_levels = 0;
  bool degenerate_product = false;
  // Chebyshev goals only: bisection along v = w over the same index.
  std::optional<double> bisection_lambda;
  std::optional<bool> bisection_agrees;
};

struct ScalarSolution {
  ResourcePoint x;
  ObjectiveVector g;
  double value = 0.0;
  GoalSpec goal;
  ScalarDiagnostics diagnostics;
};

/// Best grid point for the goal (ties: lowest lexicographic x), improved by
/// refine_levels rounds of local refinement. value is a lower bound on the
/// true optimum over the bundle.
ScalarSolution solve_scalarized(const SearchIndex& index, const GoalSpec& goal, int refine_levels,
                                double cross_check_eps = 1e-6);

/// Streams the grid without storing it, except for chebyshev goals, which
/// build a SearchIndex for the bisection cross-check.
ScalarSolution solve_scalarized(const ProblemDefinition& problem, const GoalSpec& goal, const SearchSpec& search,
                                int refine_levels, double cross_check_eps = 1e-6);

/// One solve per simplex weight vector; identical objective vectors are
/// merged and keep every weight that produced them.
Front scalarize_sweep(const SearchIndex& index, GoalKind kind, const std::vector<std::vector<double>>& weight_grid,
                      int refine_levels, unsigned threads = 0);

/// n evenly spaced weights on the 2-simplex, or a triangular lattice with
/// the given number of divisions on the 3-simplex; all strictly positive.
std::vector<std::vector<double>> simplex_weights(std::size_t m, std::size_t divisions);

}  // namespace moo
