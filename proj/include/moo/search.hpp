#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "moo/core.hpp"
#include "moo/grid.hpp"

namespace moo {

/// Discretization used by every search-based operation: an exhaustive grid
/// scan, optionally followed by local pattern refinement.
struct SearchSpec {
  GridSpec grid;
  int refine_levels = 0;
};

/// The feasible part of a search grid, evaluated once. Shared read-only by
/// membership tests, utopia computation and the certification passes.
class SearchIndex {
 public:
  /// Throws empty_grid when the grid has no points, all_infeasible when no
  /// grid point satisfies the problem's constraints.
  SearchIndex(ProblemDefinition problem, const SearchSpec& spec);

  const ProblemDefinition& problem() const noexcept { return problem_; }
  const ResolvedGrid& grid() const noexcept { return grid_; }
  int refine_levels() const noexcept { return refine_levels_; }

  std::size_t size() const noexcept { return count_; }
  std::size_t dims() const noexcept { return dims_; }
  std::size_t num_objectives() const noexcept { return m_; }
  std::span<const double> x(std::size_t i) const { return {xs_.data() + i * dims_, dims_}; }
  std::span<const double> g(std::size_t i) const { return {gs_.data() + i * m_, m_}; }
  std::span<const double> objective_values() const noexcept { return gs_; }

  /// Non-dominated cloud points ordered by decreasing objective sum, ties by
  /// grid order.
  const std::vector<std::size_t>& candidates() const noexcept { return candidates_; }

  /// Starting step sizes for local refinement around x.
  std::vector<double> initial_steps(std::span<const double> x) const;

 private:
  ProblemDefinition problem_;
  ResolvedGrid grid_;
  int refine_levels_ = 0;
  std::size_t dims_ = 0;
  std::size_t m_ = 0;
  std::size_t count_ = 0;
  std::vector<double> xs_;
  std::vector<double> gs_;
  std::vector<std::size_t> candidates_;
};

/// Lexicographically compared (primary, secondary) score.
using Score = std::array<double, 2>;

struct LocalPoint {
  ResourcePoint x;
  ObjectiveVector g;
  Score score{};
};

struct LocalSearch {
  std::function<Score(std::span<const double> g)> score;
  // Extra acceptance condition on objective values; empty means none.
  std::function<bool(std::span<const double> g)> admissible;
  // Early exit once the incumbent satisfies this; empty means never.
  std::function<bool(std::span<const double> g)> done;
};

/// Pattern search over the 3^D - 1 neighbour stencil. Moves to the best
/// strictly improving feasible neighbour until none improves, then halves
/// the steps (integral dimensions bottom out at 1). Runs `levels` halvings.
/// The result score is never worse than the start's.
LocalPoint refine_local(const ProblemDefinition& problem, LocalPoint start, std::vector<double> steps,
                        int levels, const LocalSearch& search);

}  // namespace moo
