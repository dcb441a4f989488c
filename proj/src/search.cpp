#include "moo/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace moo {

SearchIndex::SearchIndex(ProblemDefinition problem, const SearchSpec& spec)
    : problem_(std::move(problem)),
      grid_(resolve(spec.grid, problem_)),
      refine_levels_(spec.refine_levels),
      dims_(problem_.dims()),
      m_(problem_.num_objectives()) {
  if (spec.refine_levels < 0) throw Error(ErrorCode::invalid_argument, "refine_levels must be >= 0");
  if (grid_.size() == 0) throw Error(ErrorCode::empty_grid, "search grid for " + problem_.name + " is empty");
  std::vector<double> x(dims_);
  std::vector<double> g(m_);
  for (std::uint64_t i = 0; i < grid_.size(); ++i) {
    grid_.point(i, x);
    if (!problem_.feasible(x)) continue;
    problem_.evaluate(x, g);
    xs_.insert(xs_.end(), x.begin(), x.end());
    gs_.insert(gs_.end(), g.begin(), g.end());
  }
  count_ = xs_.size() / dims_;
  if (count_ == 0)
    throw Error(ErrorCode::all_infeasible, "no point of the search grid is feasible for " + problem_.name);

  candidates_ = nondominated_indices(gs_, m_);
  std::vector<double> sums(count_, 0.0);
  for (std::size_t i : candidates_) {
    const auto gi = this->g(i);
    sums[i] = std::accumulate(gi.begin(), gi.end(), 0.0);
  }
  std::stable_sort(candidates_.begin(), candidates_.end(),
                   [&](std::size_t a, std::size_t b) { return sums[a] > sums[b]; });
}

std::vector<double> SearchIndex::initial_steps(std::span<const double> x) const {
  std::vector<double> steps(dims_);
  for (std::size_t d = 0; d < dims_; ++d) {
    steps[d] = grid_.spacing(d, x[d]);
    if (problem_.integral[d]) steps[d] = std::max(steps[d] > 0 ? 1.0 : 0.0, std::round(steps[d]));
  }
  return steps;
}

LocalPoint refine_local(const ProblemDefinition& problem, LocalPoint current, std::vector<double> steps,
                        int levels, const LocalSearch& search) {
  const std::size_t dims = problem.dims();
  constexpr int kMaxMovesPerLevel = 500;
  std::size_t stencil = 1;
  for (std::size_t d = 0; d < dims; ++d) stencil *= 3;

  std::vector<double> trial(dims);
  std::vector<double> g(problem.num_objectives());
  if (search.done && search.done(current.g)) return current;

  for (int level = 0; level <= levels; ++level) {
    for (int move = 0; move < kMaxMovesPerLevel; ++move) {
      bool improved = false;
      LocalPoint best;
      for (std::size_t code = 0; code < stencil; ++code) {
        std::size_t c = code;
        bool zero = true;
        for (std::size_t d = dims; d-- > 0;) {
          const int offset = static_cast<int>(c % 3) - 1;
          c /= 3;
          double v = current.x[d] + offset * steps[d];
          if (offset != 0 && steps[d] > 0) {
            if (!problem.integral[d]) v = std::clamp(v, problem.lower[d], problem.upper[d]);
            if (v != current.x[d]) zero = false;
          }
          trial[d] = v;
        }
        if (zero || !problem.feasible(trial)) continue;
        problem.evaluate(trial, g);
        if (search.admissible && !search.admissible(g)) continue;
        const Score s = search.score(g);
        const Score& bar = improved ? best.score : current.score;
        if (s > bar) {
          best.x = trial;
          best.g = g;
          best.score = s;
          improved = true;
        }
      }
      if (!improved) break;
      current = std::move(best);
      if (search.done && search.done(current.g)) return current;
    }
    if (level == levels) break;
    for (std::size_t d = 0; d < dims; ++d)
      steps[d] = problem.integral[d] ? std::max(std::min(steps[d], 1.0), std::floor(steps[d] / 2)) : steps[d] / 2;
  }
  return current;
}

}  // namespace moo
