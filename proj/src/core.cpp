#include "moo/core.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <numeric>

namespace moo {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::nan_input: return "nan_input";
    case ErrorCode::empty_input: return "empty_input";
    case ErrorCode::empty_grid: return "empty_grid";
    case ErrorCode::all_infeasible: return "all_infeasible";
    case ErrorCode::lambda_max_too_small: return "lambda_max_too_small";
    case ErrorCode::over_constrained: return "over_constrained";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::io: return "io";
    case ErrorCode::cancelled: return "cancelled";
    case ErrorCode::internal: return "internal";
  }
  return "internal";
}

bool ProblemDefinition::in_box(std::span<const double> x) const {
  if (x.size() != dims()) return false;
  for (std::size_t d = 0; d < x.size(); ++d) {
    if (!(x[d] >= lower[d] && x[d] <= upper[d])) return false;
    if (integral[d] && std::floor(x[d]) != x[d]) return false;
  }
  return true;
}

bool ProblemDefinition::feasible(std::span<const double> x) const {
  if (!in_box(x)) return false;
  return std::all_of(constraints.begin(), constraints.end(),
                     [&](const Constraint& c) { return c.holds(x); });
}

ObjectiveVector ProblemDefinition::evaluate(std::span<const double> x) const {
  ObjectiveVector g(num_objectives());
  evaluate(x, g);
  return g;
}

void ProblemDefinition::evaluate(std::span<const double> x, std::span<double> g) const {
  if (x.size() != dims() || g.size() != num_objectives())
    throw Error(ErrorCode::dimension_mismatch, "evaluate: wrong vector length for problem " + name);
  evaluator(x, g);
}

void ProblemDefinition::validate(bool require_origin) const {
  const auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::invalid_argument, "problem " + name + ": " + msg);
  };
  if (dims() == 0) fail("resource dimension must be positive");
  if (num_objectives() == 0) fail("objective count must be positive");
  if (upper.size() != dims() || integral.size() != dims()) fail("bound/integrality length mismatch");
  if (!variables.empty() && variables.size() != dims()) fail("variable name count mismatch");
  if (!evaluator) fail("missing evaluator");
  for (std::size_t d = 0; d < dims(); ++d) {
    if (!std::isfinite(lower[d]) || !std::isfinite(upper[d])) fail("box bounds must be finite");
    if (lower[d] > upper[d]) fail("lower bound exceeds upper bound");
  }
  if (!require_origin) return;
  if (!origin) fail("missing origin point");
  if (!feasible(*origin)) fail("origin point is infeasible");
  const auto g0 = evaluate(*origin);
  if (std::any_of(g0.begin(), g0.end(), [](double v) { return v != 0.0; }))
    fail("objectives must vanish at the origin point");
}

bool dominates(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::dimension_mismatch, "dominates: vectors differ in length");
  bool strict = false;
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (a[m] < b[m]) return false;
    if (a[m] > b[m]) strict = true;
  }
  return strict;
}

namespace {

// Groups of identical rows, ordered lexicographically descending. Any
// dominator of a row belongs to an earlier group.
std::vector<std::vector<std::size_t>> sorted_groups(std::span<const double> values, std::size_t m) {
  const std::size_t n = values.size() / m;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto row = [&](std::size_t i) { return values.subspan(i * m, m); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = row(a);
    const auto rb = row(b);
    for (std::size_t k = 0; k < m; ++k)
      if (ra[k] != rb[k]) return ra[k] > rb[k];
    return a < b;
  });
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i : order) {
    if (!groups.empty() && std::equal(row(groups.back().front()).begin(),
                                      row(groups.back().front()).end(), row(i).begin())) {
      groups.back().push_back(i);
    } else {
      groups.push_back({i});
    }
  }
  return groups;
}

}  // namespace

std::vector<std::size_t> nondominated_indices(std::span<const double> values, std::size_t m) {
  if (m == 0) throw Error(ErrorCode::invalid_argument, "nondominated_indices: zero objectives");
  if (values.size() % m != 0)
    throw Error(ErrorCode::dimension_mismatch, "nondominated_indices: ragged input");
  if (std::any_of(values.begin(), values.end(), [](double v) { return std::isnan(v); }))
    throw Error(ErrorCode::nan_input, "nondominated_indices: NaN objective value");

  const auto groups = sorted_groups(values, m);
  auto row = [&](std::size_t i) { return values.subspan(i * m, m); };
  std::vector<std::size_t> survivors;
  auto keep = [&](const std::vector<std::size_t>& g) { survivors.insert(survivors.end(), g.begin(), g.end()); };

  if (m == 1) {
    if (!groups.empty()) keep(groups.front());
  } else if (m == 2) {
    double best = -INFINITY;
    for (const auto& g : groups) {
      const double y = row(g.front())[1];
      if (best >= y) continue;
      best = y;
      keep(g);
    }
  } else if (m == 3) {
    // Staircase over (g2, g3): g3 strictly decreases as g2 increases.
    std::map<double, double> stairs;
    for (const auto& g : groups) {
      const auto p = row(g.front());
      auto it = stairs.lower_bound(p[1]);
      if (it != stairs.end() && it->second >= p[2]) continue;
      it = stairs.upper_bound(p[1]);
      while (it != stairs.begin()) {
        auto prev = std::prev(it);
        if (prev->second > p[2]) break;
        it = stairs.erase(prev);
      }
      stairs[p[1]] = p[2];
      keep(g);
    }
  } else {
    std::vector<std::size_t> reps;
    for (const auto& g : groups) {
      const auto p = row(g.front());
      const bool covered = std::any_of(reps.begin(), reps.end(), [&](std::size_t s) {
        const auto q = row(s);
        for (std::size_t k = 0; k < m; ++k)
          if (q[k] < p[k]) return false;
        return true;
      });
      if (covered) continue;
      reps.push_back(g.front());
      keep(g);
    }
  }
  std::sort(survivors.begin(), survivors.end());
  return survivors;
}

std::vector<LabeledPoint> pareto_filter(const std::vector<LabeledPoint>& points) {
  if (points.empty()) throw Error(ErrorCode::empty_input, "pareto_filter: empty input");
  const std::size_t m = points.front().second.size();
  std::vector<double> flat;
  flat.reserve(points.size() * m);
  for (const auto& [x, g] : points) {
    if (g.size() != m) throw Error(ErrorCode::dimension_mismatch, "pareto_filter: non-uniform objective count");
    flat.insert(flat.end(), g.begin(), g.end());
  }
  std::vector<LabeledPoint> out;
  for (std::size_t i : nondominated_indices(flat, m)) out.push_back(points[i]);
  return out;
}

const char* to_string(GoalKind kind) noexcept {
  switch (kind) {
    case GoalKind::sum: return "sum";
    case GoalKind::product: return "product";
    case GoalKind::chebyshev: return "chebyshev";
    case GoalKind::distance: return "distance";
  }
  return "sum";
}

GoalKind parse_goal_kind(const std::string& text) {
  if (text == "sum") return GoalKind::sum;
  if (text == "product") return GoalKind::product;
  if (text == "chebyshev") return GoalKind::chebyshev;
  if (text == "distance") return GoalKind::distance;
  throw Error(ErrorCode::invalid_argument, "unknown goal kind '" + text + "'");
}

const char* to_string(Norm norm) noexcept {
  switch (norm) {
    case Norm::l1: return "1";
    case Norm::l2: return "2";
    case Norm::linf: return "inf";
  }
  return "2";
}

Norm parse_norm(const std::string& text) {
  if (text == "1") return Norm::l1;
  if (text == "2") return Norm::l2;
  if (text == "inf" || text == "infinity") return Norm::linf;
  throw Error(ErrorCode::invalid_argument, "unknown norm '" + text + "' (expected 1, 2 or inf)");
}

GoalSpec GoalSpec::weighted(GoalKind kind, std::vector<double> weights) {
  GoalSpec g;
  g.kind = kind;
  g.weights = std::move(weights);
  return g;
}

GoalSpec GoalSpec::distance(ObjectiveVector reference, Norm norm) {
  GoalSpec g;
  g.kind = GoalKind::distance;
  g.reference = std::move(reference);
  g.norm = norm;
  return g;
}

void GoalSpec::validate(std::size_t m) const {
  if (kind == GoalKind::distance) {
    if (reference.size() != m)
      throw Error(ErrorCode::dimension_mismatch, "distance goal: reference length must equal objective count");
    for (double r : reference)
      if (!std::isfinite(r)) throw Error(ErrorCode::invalid_argument, "distance goal: reference must be finite");
    return;
  }
  if (weights.size() != m)
    throw Error(ErrorCode::dimension_mismatch, "goal weights length must equal objective count");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw Error(ErrorCode::invalid_argument, "goal weights must be finite and strictly positive");
}

double eval_goal(const GoalSpec& goal, std::span<const double> g) {
  goal.validate(g.size());
  if (std::any_of(g.begin(), g.end(), [](double v) { return std::isnan(v); }))
    throw Error(ErrorCode::nan_input, "eval_goal: NaN objective value");
  switch (goal.kind) {
    case GoalKind::sum: {
      double s = 0.0;
      for (std::size_t m = 0; m < g.size(); ++m) s += goal.weights[m] * g[m];
      return s;
    }
    case GoalKind::product: {
      double p = 1.0;
      for (std::size_t m = 0; m < g.size(); ++m) {
        if (g[m] == 0.0) return 0.0;
        p *= std::pow(g[m], goal.weights[m]);
      }
      return p;
    }
    case GoalKind::chebyshev: {
      double v = INFINITY;
      for (std::size_t m = 0; m < g.size(); ++m) v = std::min(v, g[m] / goal.weights[m]);
      return v;
    }
    case GoalKind::distance: {
      double acc = 0.0;
      for (std::size_t m = 0; m < g.size(); ++m) {
        const double d = std::abs(goal.reference[m] - g[m]);
        switch (goal.norm) {
          case Norm::l1: acc += d; break;
          case Norm::l2: acc += d * d; break;
          case Norm::linf: acc = std::max(acc, d); break;
        }
      }
      return goal.norm == Norm::l2 ? -std::sqrt(acc) : -acc;
    }
  }
  throw Error(ErrorCode::internal, "eval_goal: unknown goal kind");
}

std::vector<double> normalize_weights(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total))
    throw Error(ErrorCode::invalid_argument, "normalize_weights: weights must have a positive finite sum");
  std::vector<double> out(weights.begin(), weights.end());
  for (double& w : out) w /= total;
  return out;
}

}  // namespace moo
