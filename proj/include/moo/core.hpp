#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "moo/error.hpp"

namespace moo {

/// A point in objective space, one entry per objective. Units live on the
/// owning problem's objective metadata.
using ObjectiveVector = std::vector<double>;

/// A resource utilization x. Integral dimensions hold integer-valued reals.
using ResourcePoint = std::vector<double>;

struct Objective {
  std::string name;
  std::string unit;
};

struct Constraint {
  std::string name;
  std::function<bool(std::span<const double>)> holds;
};

/// Writes all M objective values for x into g.
using Evaluator = std::function<void(std::span<const double> x, std::span<double> g)>;

/// Resource bundle (box, integrality, predicates) plus the vector objective.
struct ProblemDefinition {
  std::string name;
  std::vector<std::string> variables;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> integral;
  std::vector<Constraint> constraints;
  std::vector<Objective> objectives;
  Evaluator evaluator;
  // Derived problems with objective floors usually exclude the origin.
  std::optional<ResourcePoint> origin;

  std::size_t dims() const noexcept { return lower.size(); }
  std::size_t num_objectives() const noexcept { return objectives.size(); }

  bool in_box(std::span<const double> x) const;
  bool feasible(std::span<const double> x) const;
  ObjectiveVector evaluate(std::span<const double> x) const;
  void evaluate(std::span<const double> x, std::span<double> g) const;

  /// Checks the structural invariants. With require_origin, also checks that
  /// the origin is feasible and maps to the zero vector.
  void validate(bool require_origin = true) const;
};

/// a objectively preferable to b: a >= b componentwise and a != b.
bool dominates(std::span<const double> a, std::span<const double> b);

/// Indices (ascending) of rows in a row-major n x m matrix not dominated by
/// any other row. Identical rows never dominate each other.
std::vector<std::size_t> nondominated_indices(std::span<const double> values, std::size_t m);

using LabeledPoint = std::pair<ResourcePoint, ObjectiveVector>;

std::vector<LabeledPoint> pareto_filter(const std::vector<LabeledPoint>& points);

enum class GoalKind { sum, product, chebyshev, distance };
enum class Norm { l1, l2, linf };

const char* to_string(GoalKind kind) noexcept;
GoalKind parse_goal_kind(const std::string& text);
const char* to_string(Norm norm) noexcept;
Norm parse_norm(const std::string& text);

struct GoalSpec {
  GoalKind kind = GoalKind::sum;
  std::vector<double> weights;
  ObjectiveVector reference;
  Norm norm = Norm::l2;

  static GoalSpec weighted(GoalKind kind, std::vector<double> weights);
  static GoalSpec distance(ObjectiveVector reference, Norm norm = Norm::l2);

  void validate(std::size_t m) const;
};

/// Larger is always more preferred.
double eval_goal(const GoalSpec& goal, std::span<const double> g);

/// Rescales to the unit simplex.
std::vector<double> normalize_weights(std::span<const double> weights);

}  // namespace moo
