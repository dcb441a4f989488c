#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "moo/core.hpp"
#include "moo/problems.hpp"

using namespace moo;
using V = std::vector<double>;

TEST_CASE("dominates: examples") {
  CHECK(dominates(V{2, 1}, V{1, 1}));
  CHECK_FALSE(dominates(V{1, 1}, V{1, 1}));
  CHECK_FALSE(dominates(V{2, 0}, V{1, 1}));
  CHECK_FALSE(dominates(V{1, 1}, V{2, 0}));
  CHECK_THROWS_AS(dominates(V{1, 2}, V{1, 2, 3}), Error);
}

TEST_CASE("dominates: irreflexive, antisymmetric, transitive on random triples") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(0, 3);
  for (int t = 0; t < 20000; ++t) {
    V a(3), b(3), c(3);
    for (int k = 0; k < 3; ++k) {
      a[k] = d(rng);
      b[k] = d(rng);
      c[k] = d(rng);
    }
    CHECK_FALSE(dominates(a, a));
    CHECK_FALSE((dominates(a, b) && dominates(b, a)));
    if (dominates(a, b) && dominates(b, c)) CHECK(dominates(a, c));
    CHECK(dominates(a, b) == testing::oracle_dominates(a, b));
  }
}

static std::vector<V> objectives_of(const std::vector<LabeledPoint>& pts) {
  std::vector<V> out;
  for (const auto& p : pts) out.push_back(p.second);
  return out;
}

TEST_CASE("pareto_filter: examples") {
  std::vector<LabeledPoint> pts = {{{0}, {1, 2}}, {{1}, {2, 1}}, {{2}, {1, 1}}, {{3}, {0, 0}}};
  CHECK(objectives_of(pareto_filter(pts)) == std::vector<V>{{1, 2}, {2, 1}});
  CHECK(objectives_of(pareto_filter({{{0}, {5, 5}}})) == std::vector<V>{{5, 5}});
  CHECK_THROWS_AS(pareto_filter({}), Error);
  CHECK_THROWS_AS(pareto_filter({{{0}, {1, 2}}, {{1}, {1, 2, 3}}}), Error);
}

TEST_CASE("pareto_filter: identical vectors all survive, in input order") {
  std::vector<LabeledPoint> pts = {{{0}, {1, 1}}, {{1}, {0, 3}}, {{2}, {1, 1}}, {{3}, {0, 0}}};
  const auto out = pareto_filter(pts);
  REQUIRE(out.size() == 3);
  CHECK(out[0].first == V{0});
  CHECK(out[1].first == V{1});
  CHECK(out[2].first == V{2});
}

TEST_CASE("pareto_filter: 1000 random points in [0,1]^2 match the all-pairs oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u;
  std::vector<LabeledPoint> pts;
  std::vector<V> raw;
  for (int i = 0; i < 1000; ++i) {
    V g{u(rng), u(rng)};
    raw.push_back(g);
    pts.push_back({{double(i)}, g});
  }
  std::vector<std::size_t> got;
  for (const auto& p : pareto_filter(pts)) got.push_back(std::size_t(p.first[0]));
  CHECK(got == testing::oracle_survivors(raw));
}

TEST_CASE("nondominated_indices: oracle agreement for M = 1..5 with ties, idempotence") {
  std::mt19937_64 rng(12);
  for (int inst = 0; inst < 60; ++inst) {
    const std::size_t m = 1 + inst % 5;
    const std::size_t n = 1 + rng() % 300;
    std::vector<V> rows(n, V(m));
    for (auto& r : rows)
      for (auto& v : r) v = inst % 2 ? double(rng() % 4) : std::uniform_real_distribution<double>()(rng);
    const auto flat = testing::flatten(rows);
    const auto got = nondominated_indices(flat, m);
    CHECK(got == testing::oracle_survivors(rows));
    std::vector<V> kept;
    for (auto i : got) kept.push_back(rows[i]);
    const auto again = nondominated_indices(testing::flatten(kept), m);
    CHECK(again.size() == kept.size());
  }
}

TEST_CASE("nondominated_indices: input errors") {
  CHECK_THROWS_AS(nondominated_indices(V{1, 2, 3}, 2), Error);
  CHECK_THROWS_AS(nondominated_indices(V{1, NAN}, 2), Error);
  CHECK(nondominated_indices(V{}, 2).empty());
}

TEST_CASE("eval_goal: examples") {
  CHECK(eval_goal(GoalSpec::weighted(GoalKind::sum, {1, 1}), V{2, 3}) == 5);
  CHECK(eval_goal(GoalSpec::weighted(GoalKind::chebyshev, {1, 2}), V{2, 3}) == 1.5);
  CHECK(eval_goal(GoalSpec::distance({1, 1}, Norm::l2), V{1, 1}) == 0);
  CHECK(eval_goal(GoalSpec::weighted(GoalKind::product, {0.5, 0.5}), V{4, 9}) == doctest::Approx(6));
  CHECK(eval_goal(GoalSpec::weighted(GoalKind::product, {1, 1}), V{0, 9}) == 0.0);
  CHECK(eval_goal(GoalSpec::distance({3, 4}, Norm::l1), V{0, 0}) == -7);
  CHECK(eval_goal(GoalSpec::distance({3, 4}, Norm::l2), V{0, 0}) == -5);
  CHECK(eval_goal(GoalSpec::distance({3, 4}, Norm::linf), V{0, 0}) == -4);
}

TEST_CASE("eval_goal: invalid goals and inputs") {
  CHECK_THROWS_AS(eval_goal(GoalSpec::weighted(GoalKind::sum, {1, 0}), V{1, 1}), Error);
  CHECK_THROWS_AS(eval_goal(GoalSpec::weighted(GoalKind::sum, {1, -1}), V{1, 1}), Error);
  CHECK_THROWS_AS(eval_goal(GoalSpec::weighted(GoalKind::sum, {1}), V{1, 1}), Error);
  CHECK_THROWS_AS(eval_goal(GoalSpec::distance({1}), V{1, 1}), Error);
  CHECK_THROWS_AS(eval_goal(GoalSpec::weighted(GoalKind::sum, {1, 1}), V{1, NAN}), Error);
  CHECK(GoalSpec{}.norm == Norm::l2);
  CHECK_THROWS_AS(parse_goal_kind("median"), Error);
  CHECK_THROWS_AS(parse_norm("3"), Error);
}

TEST_CASE("eval_goal: monotone under dominance for sum, product, chebyshev") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 2.0), w(0.1, 3.0);
  for (int t = 0; t < 5000; ++t) {
    V b{u(rng), u(rng), u(rng)};
    V a = b;
    a[rng() % 3] += u(rng) + 1e-3;
    REQUIRE(dominates(a, b));
    const V weights{w(rng), w(rng), w(rng)};
    for (auto kind : {GoalKind::sum, GoalKind::product, GoalKind::chebyshev})
      CHECK(eval_goal(GoalSpec::weighted(kind, weights), a) >= eval_goal(GoalSpec::weighted(kind, weights), b));
  }
}

TEST_CASE("product goal: argmax invariant under positive rescaling of one objective") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<V> cands(50, V(3));
    for (auto& c : cands)
      for (auto& v : c) v = u(rng);
    const auto goal = GoalSpec::weighted(GoalKind::product, {u(rng), u(rng), u(rng)});
    const std::size_t m = rng() % 3;
    const double c = u(rng) * 10;
    auto argmax = [&](const std::vector<V>& pts) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < pts.size(); ++i)
        if (eval_goal(goal, pts[i]) > eval_goal(goal, pts[best])) best = i;
      return best;
    };
    auto scaled = cands;
    for (auto& s : scaled) s[m] *= c;
    CHECK(argmax(cands) == argmax(scaled));
  }
}

TEST_CASE("chebyshev goal: argmax is a candidate with maximal epigraph lambda") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(0.0, 1.0), w(0.1, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<V> cands(40, V(2));
    for (auto& c : cands)
      for (auto& v : c) v = u(rng);
    const V v{w(rng), w(rng)};
    const auto goal = GoalSpec::weighted(GoalKind::chebyshev, v);
    double best_value = -1, best_lambda = -1;
    for (const auto& g : cands) {
      best_value = std::max(best_value, eval_goal(goal, g));
      // largest lambda with g >= lambda v, found independently by bisection
      double lo = 0, hi = 100;
      for (int it = 0; it < 200; ++it) {
        const double mid = (lo + hi) / 2;
        (g[0] >= mid * v[0] && g[1] >= mid * v[1] ? lo : hi) = mid;
      }
      best_lambda = std::max(best_lambda, lo);
    }
    CHECK(best_value == doctest::Approx(best_lambda).epsilon(1e-12));
  }
}

TEST_CASE("normalize_weights") {
  const auto w = normalize_weights(V{1, 3});
  CHECK(w[0] == 0.25);
  CHECK(w[1] == 0.75);
  CHECK_THROWS_AS(normalize_weights(V{0, 0}), Error);
}

TEST_CASE("ProblemDefinition::validate") {
  auto p = testing::identity_box(2);
  CHECK_NOTHROW(p.validate());
  auto bad = p;
  bad.upper[0] = INFINITY;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = p;
  bad.lower[1] = 2;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = p;
  bad.origin = V{0.5, 0};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad.origin.reset();
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_NOTHROW(bad.validate(false));
  CHECK_THROWS_AS(p.evaluate(V{0.1}), Error);
}

TEST_CASE("ProblemDefinition::feasible honours box, integrality and predicates") {
  const auto p = toy_simplex();
  CHECK(p.feasible(V{0.5, 0.5}));
  CHECK_FALSE(p.feasible(V{0.6, 0.5}));
  CHECK_FALSE(p.feasible(V{-0.1, 0}));
  auto q = testing::identity_box(1);
  q.integral = {true};
  CHECK(q.feasible(V{1}));
  CHECK_FALSE(q.feasible(V{0.5}));
}

TEST_CASE("restrict_objectives keeps the chosen objectives in order") {
  const auto p = restrict_objectives(testing::identity_box(3), {2, 0});
  CHECK(p.num_objectives() == 2);
  CHECK(p.evaluate(V{0.1, 0.2, 0.3}) == V{0.3, 0.1});
  CHECK(p.name == "identity_box[g3,g1]");
  CHECK_THROWS_AS(restrict_objectives(p, {5}), Error);
  CHECK_THROWS_AS(restrict_objectives(p, {}), Error);
}
