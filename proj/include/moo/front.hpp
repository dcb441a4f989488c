#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moo/core.hpp"
#include "moo/search.hpp"

namespace moo {

/// Search direction in objective space: nonnegative, not all zero.
using Direction = std::vector<double>;

enum class BoundaryKind { interior, weak, strong_certified };
enum class FrontMethod { grid, direction_search, scalarization };

const char* to_string(BoundaryKind kind) noexcept;
BoundaryKind parse_boundary_kind(const std::string& text);
const char* to_string(FrontMethod method) noexcept;
FrontMethod parse_front_method(const std::string& text);

struct FrontPoint {
  ResourcePoint x;
  ObjectiveVector g;
  std::optional<Direction> direction;
  std::optional<double> lambda;
  BoundaryKind boundary_kind = BoundaryKind::interior;
  // Final bisection bracket width (0 for non-bisection points).
  double eps = 0.0;
  // Membership tests performed, including the lambda_max check.
  int iterations = 0;
  // Scalarization weights that produced this point.
  std::vector<std::vector<double>> weights;

  bool operator==(const FrontPoint&) const = default;
};

struct SampleError {
  std::size_t index = 0;
  Direction direction;
  std::string code;
  std::string message;

  bool operator==(const SampleError&) const = default;
};

struct Front {
  std::string problem;
  FrontMethod method = FrontMethod::grid;
  double eps = 0.0;
  std::size_t count = 0;
  std::uint64_t refinement_version = 0;
  std::size_t dims = 0;
  std::size_t num_objectives = 0;
  std::vector<FrontPoint> points;
  std::vector<SampleError> errors;
  std::string created_at;

  bool operator==(const Front&) const = default;
};

struct Witness {
  ResourcePoint x;
  ObjectiveVector g;
};

/// Evaluates every feasible grid point. Survivors of the dominance filter are
/// tagged weak, the rest interior.
Front grid_sample(const SearchIndex& index);
Front grid_sample(const ProblemDefinition& problem, const GridSpec& grid);

/// Finds a feasible x with g(x) >= mu componentwise. mu = 0 yields the
/// problem's origin when it has one. Otherwise: first non-dominated grid
/// point in scan order, else (with refinement enabled) a local search from
/// the grid point with the best worst-case ratio g_m / mu_m.
std::optional<Witness> membership_test(const SearchIndex& index, std::span<const double> mu);
std::optional<ResourcePoint> membership_test(const ProblemDefinition& problem, std::span<const double> mu,
                                             const SearchSpec& search);

/// Bisection on lambda over [0, lambda_max] along direction v. Throws
/// lambda_max_too_small when lambda_max * v is attainable.
FrontPoint bisect_ray(const SearchIndex& index, std::span<const double> v, double eps, double lambda_max);

/// Unit directions in the positive orthant. M=2: equally spaced angles in
/// (0, pi/2). M=3: deterministic spiral over the positive octant.
std::vector<Direction> generate_directions(std::size_t m, std::size_t count);

struct UtopiaPoint {
  ObjectiveVector values;
  std::vector<ResourcePoint> witnesses;
};

UtopiaPoint utopia(const SearchIndex& index);
UtopiaPoint utopia(const ProblemDefinition& problem, const SearchSpec& search);

/// Largest sum of objectives subject to g >= floor, started from the given
/// witness (or the best grid point when it is better).
Witness augmented_resolve(const SearchIndex& index, std::span<const double> floor, const Witness& start);

struct SampleOptions {
  std::size_t count = 32;
  double eps = 1e-6;
  // Normalization for the search directions and lambda_max; computed from
  // the index when absent.
  std::optional<ObjectiveVector> utopia;
  unsigned threads = 0;
  std::function<void(std::size_t done, std::size_t total)> progress;
  const std::atomic<bool>* cancel = nullptr;
};

inline constexpr double kLambdaMaxMargin = 0.01;

/// Direction search: one bisection per generated direction, scaled
/// componentwise by the utopia point, followed by strong certification.
Front sample_front(const SearchIndex& index, const SampleOptions& options);

}  // namespace moo
