#include "moo/front.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "moo/parallel.hpp"

namespace moo {

const char* to_string(BoundaryKind kind) noexcept {
  switch (kind) {
    case BoundaryKind::interior: return "interior";
    case BoundaryKind::weak: return "weak";
    case BoundaryKind::strong_certified: return "strong_certified";
  }
  return "interior";
}

BoundaryKind parse_boundary_kind(const std::string& text) {
  if (text == "interior") return BoundaryKind::interior;
  if (text == "weak") return BoundaryKind::weak;
  if (text == "strong_certified") return BoundaryKind::strong_certified;
  throw Error(ErrorCode::invalid_argument, "unknown boundary kind '" + text + "'");
}

const char* to_string(FrontMethod method) noexcept {
  switch (method) {
    case FrontMethod::grid: return "grid";
    case FrontMethod::direction_search: return "direction";
    case FrontMethod::scalarization: return "scalarization";
  }
  return "grid";
}

FrontMethod parse_front_method(const std::string& text) {
  if (text == "grid") return FrontMethod::grid;
  if (text == "direction" || text == "direction_search") return FrontMethod::direction_search;
  if (text == "scalarization") return FrontMethod::scalarization;
  throw Error(ErrorCode::invalid_argument, "unknown front method '" + text + "'");
}

namespace {

bool covers(std::span<const double> g, std::span<const double> mu) {
  for (std::size_t m = 0; m < g.size(); ++m)
    if (g[m] < mu[m]) return false;
  return true;
}

double sum_of(std::span<const double> g) { return std::accumulate(g.begin(), g.end(), 0.0); }

void check_objective_vector(std::span<const double> mu, std::size_t m, const char* what) {
  if (mu.size() != m)
    throw Error(ErrorCode::dimension_mismatch, std::string(what) + ": length must equal objective count");
  for (double v : mu) {
    if (std::isnan(v)) throw Error(ErrorCode::nan_input, std::string(what) + ": NaN entry");
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::invalid_argument, std::string(what) + ": entries must be finite and nonnegative");
  }
}

}  // namespace

Front grid_sample(const SearchIndex& index) {
  Front front;
  front.problem = index.problem().name;
  front.method = FrontMethod::grid;
  front.count = index.size();
  front.dims = index.dims();
  front.num_objectives = index.num_objectives();
  const auto survivors = nondominated_indices(index.objective_values(), index.num_objectives());
  std::vector<bool> boundary(index.size(), false);
  for (std::size_t i : survivors) boundary[i] = true;
  front.points.reserve(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    FrontPoint p;
    p.x.assign(index.x(i).begin(), index.x(i).end());
    p.g.assign(index.g(i).begin(), index.g(i).end());
    p.boundary_kind = boundary[i] ? BoundaryKind::weak : BoundaryKind::interior;
    front.points.push_back(std::move(p));
  }
  return front;
}

Front grid_sample(const ProblemDefinition& problem, const GridSpec& grid) {
  return grid_sample(SearchIndex(problem, SearchSpec{grid, 0}));
}

std::optional<Witness> membership_test(const SearchIndex& index, std::span<const double> mu) {
  check_objective_vector(mu, index.num_objectives(), "membership_test");
  const auto& origin = index.problem().origin;
  if (origin && std::all_of(mu.begin(), mu.end(), [](double v) { return v == 0.0; }) &&
      index.problem().feasible(*origin))
    return Witness{*origin, index.problem().evaluate(*origin)};
  for (std::size_t i : index.candidates()) {
    if (covers(index.g(i), mu)) return Witness{{index.x(i).begin(), index.x(i).end()}, {index.g(i).begin(), index.g(i).end()}};
  }
  if (index.refine_levels() == 0) return std::nullopt;

  auto score = [&](std::span<const double> g) -> Score {
    double s = INFINITY;
    for (std::size_t m = 0; m < g.size(); ++m)
      if (mu[m] > 0.0) s = std::min(s, g[m] / mu[m]);
    return {s, 0.0};
  };
  std::size_t best = 0;
  Score best_score = score(index.g(0));
  for (std::size_t i = 1; i < index.size(); ++i) {
    const Score s = score(index.g(i));
    if (s > best_score) {
      best = i;
      best_score = s;
    }
  }
  LocalPoint start{{index.x(best).begin(), index.x(best).end()}, {index.g(best).begin(), index.g(best).end()}, best_score};
  LocalSearch search;
  search.score = score;
  search.done = [&](std::span<const double> g) { return covers(g, mu); };
  auto result = refine_local(index.problem(), std::move(start), index.initial_steps(index.x(best)),
                             index.refine_levels(), search);
  if (!covers(result.g, mu)) return std::nullopt;
  return Witness{std::move(result.x), std::move(result.g)};
}

std::optional<ResourcePoint> membership_test(const ProblemDefinition& problem, std::span<const double> mu,
                                             const SearchSpec& search) {
  auto found = membership_test(SearchIndex(problem, search), mu);
  if (!found) return std::nullopt;
  return std::move(found->x);
}

FrontPoint bisect_ray(const SearchIndex& index, std::span<const double> v, double eps, double lambda_max) {
  const std::size_t m = index.num_objectives();
  check_objective_vector(v, m, "bisect_ray direction");
  if (std::none_of(v.begin(), v.end(), [](double c) { return c > 0.0; }))
    throw Error(ErrorCode::invalid_argument, "bisect_ray: direction needs a positive component");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorCode::invalid_argument, "bisect_ray: eps must be > 0");
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max))
    throw Error(ErrorCode::invalid_argument, "bisect_ray: lambda_max must be > 0");

  std::vector<double> mu(m);
  auto at = [&](double lambda) {
    for (std::size_t k = 0; k < m; ++k) mu[k] = lambda * v[k];
    return membership_test(index, mu);
  };

  FrontPoint point;
  point.iterations = 1;
  if (at(lambda_max)) throw Error(ErrorCode::lambda_max_too_small, "bisect_ray: lambda_max * v is attainable");

  double lo = 0.0;
  double hi = lambda_max;
  std::optional<Witness> witness;
  while (hi - lo > eps) {
    const double mid = (lo + hi) / 2;
    if (mid <= lo || mid >= hi) break;  // bracket narrower than one ulp
    ++point.iterations;
    if (auto w = at(mid)) {
      lo = mid;
      witness = std::move(w);
    } else {
      hi = mid;
    }
  }
  if (!witness) witness = at(0.0);
  if (!witness) throw Error(ErrorCode::all_infeasible, "bisect_ray: origin of the ray is not attainable");

  point.x = std::move(witness->x);
  point.g = std::move(witness->g);
  point.direction = Direction(v.begin(), v.end());
  point.lambda = lo;
  point.eps = hi - lo;
  point.boundary_kind = BoundaryKind::weak;
  return point;
}

std::vector<Direction> generate_directions(std::size_t m, std::size_t count) {
  if (count == 0) throw Error(ErrorCode::invalid_argument, "generate_directions: count must be >= 1");
  std::vector<Direction> out;
  switch (m) {
    case 1:
      out.push_back({1.0});
      break;
    case 2:
      for (std::size_t i = 0; i < count; ++i) {
        const double theta = static_cast<double>(i + 1) / static_cast<double>(count + 1) * std::numbers::pi / 2;
        out.push_back({std::cos(theta), std::sin(theta)});
      }
      break;
    case 3: {
      // Area-uniform heights, golden-ratio azimuths folded into [0, pi/2].
      const double golden = std::numbers::phi - 1.0;
      for (std::size_t i = 0; i < count; ++i) {
        const double z = 1.0 - (static_cast<double>(i) + 0.5) / static_cast<double>(count);
        const double r = std::sqrt(1.0 - z * z);
        double frac = (static_cast<double>(i) + 0.5) * golden;
        frac -= std::floor(frac);
        const double phi = frac * std::numbers::pi / 2;
        out.push_back({r * std::cos(phi), r * std::sin(phi), z});
      }
      break;
    }
    default:
      throw Error(ErrorCode::unsupported, "generate_directions: only 1 to 3 objectives are supported");
  }
  return out;
}

UtopiaPoint utopia(const SearchIndex& index) {
  const std::size_t m = index.num_objectives();
  UtopiaPoint u;
  u.values.assign(m, -INFINITY);
  u.witnesses.resize(m);
  std::vector<std::size_t> arg(m, 0);
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto g = index.g(i);
    for (std::size_t k = 0; k < m; ++k)
      if (g[k] > u.values[k]) {
        u.values[k] = g[k];
        arg[k] = i;
      }
  }
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = arg[k];
    LocalPoint best{{index.x(i).begin(), index.x(i).end()}, {index.g(i).begin(), index.g(i).end()}, {u.values[k], 0.0}};
    if (index.refine_levels() > 0) {
      LocalSearch search;
      search.score = [k](std::span<const double> g) -> Score { return {g[k], 0.0}; };
      best = refine_local(index.problem(), std::move(best), index.initial_steps(index.x(i)), index.refine_levels(), search);
    }
    u.values[k] = best.g[k];
    u.witnesses[k] = std::move(best.x);
  }
  return u;
}

UtopiaPoint utopia(const ProblemDefinition& problem, const SearchSpec& search) {
  return utopia(SearchIndex(problem, search));
}

Witness augmented_resolve(const SearchIndex& index, std::span<const double> floor, const Witness& start) {
  LocalPoint best{start.x, start.g, {sum_of(start.g), 0.0}};
  for (std::size_t i : index.candidates()) {
    if (!covers(index.g(i), floor)) continue;
    const double s = sum_of(index.g(i));
    if (s > best.score[0]) best = LocalPoint{{index.x(i).begin(), index.x(i).end()}, {index.g(i).begin(), index.g(i).end()}, {s, 0.0}};
    break;  // candidates are ordered by decreasing sum
  }
  if (index.refine_levels() > 0) {
    LocalSearch search;
    search.score = [](std::span<const double> g) -> Score { return {sum_of(g), 0.0}; };
    search.admissible = [&](std::span<const double> g) { return covers(g, floor); };
    auto steps = index.initial_steps(best.x);
    best = refine_local(index.problem(), std::move(best), std::move(steps), index.refine_levels(), search);
  }
  return Witness{std::move(best.x), std::move(best.g)};
}

Front sample_front(const SearchIndex& index, const SampleOptions& options) {
  if (!(options.eps > 0.0)) throw Error(ErrorCode::invalid_argument, "sample_front: eps must be > 0");
  const std::size_t m = index.num_objectives();
  const ObjectiveVector u = options.utopia ? *options.utopia : utopia(index).values;
  check_objective_vector(u, m, "sample_front utopia");
  const auto dirs = generate_directions(m, options.count);

  Front front;
  front.problem = index.problem().name;
  front.method = FrontMethod::direction_search;
  front.eps = options.eps;
  front.count = dirs.size();
  front.dims = index.dims();
  front.num_objectives = m;

  std::vector<std::optional<FrontPoint>> results(dirs.size());
  std::vector<std::optional<SampleError>> failures(dirs.size());
  std::atomic<std::size_t> done{0};
  parallel_for(dirs.size(), options.threads == 0 ? default_threads() : options.threads, [&](std::size_t i) {
    if (options.cancel && options.cancel->load()) return;
    Direction v(m);
    for (std::size_t k = 0; k < m; ++k) v[k] = u[k] * dirs[i][k];
    try {
      double ratio = INFINITY;
      for (std::size_t k = 0; k < m; ++k)
        if (v[k] > 0.0) ratio = std::min(ratio, u[k] / v[k]);
      if (!std::isfinite(ratio))
        throw Error(ErrorCode::invalid_argument, "direction is zero after utopia scaling");
      results[i] = bisect_ray(index, v, options.eps, (1.0 + kLambdaMaxMargin) * ratio);
    } catch (const Error& e) {
      failures[i] = SampleError{i, v, to_string(e.code()), e.what()};
    }
    const std::size_t n = ++done;
    if (options.progress) options.progress(n, dirs.size());
  });
  if (options.cancel && options.cancel->load()) throw Error(ErrorCode::cancelled, "sample_front cancelled");

  // Strong certification: the augmented re-solve must reproduce the witness
  // and no other sampled point may dominate it.
  std::vector<bool> stable(dirs.size(), false);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    if (!results[i]) continue;
    auto& p = *results[i];
    std::vector<double> floor(m);
    for (std::size_t k = 0; k < m; ++k) floor[k] = *p.lambda * (*p.direction)[k];
    Witness current{p.x, p.g};
    Witness aug = augmented_resolve(index, floor, current);
    if (aug.g != current.g) {
      Witness again = augmented_resolve(index, floor, aug);
      stable[i] = again.g == aug.g;
      p.x = std::move(aug.x);
      p.g = std::move(aug.g);
    } else {
      stable[i] = true;
    }
  }
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    if (!results[i]) continue;
    bool dominated = false;
    for (std::size_t j = 0; j < dirs.size() && !dominated; ++j)
      dominated = j != i && results[j] && dominates(results[j]->g, results[i]->g);
    results[i]->boundary_kind = stable[i] && !dominated ? BoundaryKind::strong_certified : BoundaryKind::weak;
  }
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    if (results[i]) front.points.push_back(std::move(*results[i]));
    if (failures[i]) front.errors.push_back(std::move(*failures[i]));
  }
  return front;
}

}  // namespace moo
