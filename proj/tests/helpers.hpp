#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "moo/core.hpp"
#include "moo/grid.hpp"
#include "moo/mimo.hpp"
#include "moo/search.hpp"

namespace testing {

// All-pairs dominance, written independently of the library.
inline bool oracle_dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool ge = true, gt = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ge = ge && a[k] >= b[k];
    gt = gt || a[k] > b[k];
  }
  return ge && gt;
}

inline std::vector<std::size_t> oracle_survivors(const std::vector<std::vector<double>>& pts) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size() && !dominated; ++j) dominated = oracle_dominates(pts[j], pts[i]);
    if (!dominated) out.push_back(i);
  }
  return out;
}

inline std::vector<double> flatten(const std::vector<std::vector<double>>& rows) {
  std::vector<double> out;
  for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

// g(x) = x on the full box [0,1]^d.
inline moo::ProblemDefinition identity_box(std::size_t d) {
  moo::ProblemDefinition p;
  p.name = "identity_box";
  p.lower.assign(d, 0.0);
  p.upper.assign(d, 1.0);
  p.integral.assign(d, false);
  for (std::size_t k = 0; k < d; ++k) p.objectives.push_back({"g" + std::to_string(k + 1), "unit"});
  p.evaluator = [](std::span<const double> x, std::span<double> g) { std::copy(x.begin(), x.end(), g.begin()); };
  p.origin = moo::ResourcePoint(d, 0.0);
  return p;
}

// g(x) = x on the union of [0,1]x[0,0.2], [0,0.2]x[0,1] and [0,0.55]^2.
// The front point (0.55, 0.55) sits in a nonconvex dent: no weighted sum
// prefers it over both (1, 0.2) and (0.2, 1).
inline moo::ProblemDefinition three_boxes() {
  moo::ProblemDefinition p;
  p.name = "three_boxes";
  p.lower = {0, 0};
  p.upper = {1, 1};
  p.integral = {false, false};
  p.constraints.push_back({"union of boxes", [](std::span<const double> x) {
                             return x[1] <= 0.2 || x[0] <= 0.2 || (x[0] <= 0.55 && x[1] <= 0.55);
                           }});
  p.objectives = {{"g1", "unit"}, {"g2", "unit"}};
  p.evaluator = [](std::span<const double> x, std::span<double> g) {
    g[0] = x[0];
    g[1] = x[1];
  };
  p.origin = moo::ResourcePoint{0, 0};
  return p;
}

// Coarse MIMO grid so O(n^2) oracles stay affordable.
inline moo::SearchSpec small_mimo_search() {
  moo::SearchSpec s;
  s.grid.axes = {moo::GridAxis::range(1, 241, 20), moo::GridAxis::range(2, 500, 36),
                 moo::GridAxis::logarithmic(1e-3, 1e4, 12, true)};
  return s;
}

inline double norm2(const std::vector<double>& v) {
  double s = 0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

}  // namespace testing
