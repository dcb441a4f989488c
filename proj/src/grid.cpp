#include "moo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace moo {

GridAxis GridAxis::explicit_values(std::vector<double> values) {
  GridAxis a;
  a.kind = Kind::values;
  a.values = std::move(values);
  return a;
}

GridAxis GridAxis::linear(double lo, double hi, std::size_t count) {
  GridAxis a;
  a.kind = Kind::linear;
  a.lo = lo;
  a.hi = hi;
  a.count = count;
  return a;
}

GridAxis GridAxis::logarithmic(double lo, double hi, std::size_t count, bool include_zero) {
  GridAxis a;
  a.kind = Kind::logarithmic;
  a.lo = lo;
  a.hi = hi;
  a.count = count;
  a.include_zero = include_zero;
  return a;
}

GridAxis GridAxis::range(double lo, double hi, double step) {
  GridAxis a;
  a.kind = Kind::range;
  a.lo = lo;
  a.hi = hi;
  a.step = step;
  return a;
}

GridSpec GridSpec::uniform(const ProblemDefinition& problem, std::size_t count) {
  GridSpec spec;
  for (std::size_t d = 0; d < problem.dims(); ++d)
    spec.axes.push_back(GridAxis::linear(problem.lower[d], problem.upper[d], count));
  return spec;
}

ResolvedGrid::ResolvedGrid(std::vector<std::vector<double>> axes) : axes_(std::move(axes)) {
  size_ = axes_.empty() ? 0 : 1;
  for (const auto& a : axes_) {
    if (a.empty()) {
      size_ = 0;
      break;
    }
    if (size_ > kMaxGridPoints / a.size())
      throw Error(ErrorCode::invalid_argument, "grid too large (more than 2^36 points)");
    size_ *= a.size();
  }
}

void ResolvedGrid::point(std::uint64_t index, std::span<double> x) const {
  for (std::size_t d = axes_.size(); d-- > 0;) {
    const auto n = axes_[d].size();
    x[d] = axes_[d][index % n];
    index /= n;
  }
}

double ResolvedGrid::spacing(std::size_t d, double v) const {
  const auto& a = axes_[d];
  if (a.size() < 2) return 0.0;
  auto it = std::lower_bound(a.begin(), a.end(), v);
  double gap = 0.0;
  if (it != a.end() && *it == v) {
    if (it != a.begin()) gap = std::max(gap, v - *std::prev(it));
    if (std::next(it) != a.end()) gap = std::max(gap, *std::next(it) - v);
  } else if (it == a.begin()) {
    gap = a[1] - a[0];
  } else if (it == a.end()) {
    gap = a.back() - a[a.size() - 2];
  } else {
    gap = *it - *std::prev(it);
  }
  return gap;
}

namespace {

std::vector<double> expand(const GridAxis& axis, std::size_t d) {
  const auto bad = [&](const std::string& msg) {
    return Error(ErrorCode::invalid_argument, "grid axis " + std::to_string(d) + ": " + msg);
  };
  std::vector<double> out;
  switch (axis.kind) {
    case GridAxis::Kind::values:
      out = axis.values;
      break;
    case GridAxis::Kind::linear:
      if (axis.count == 0) break;
      if (axis.count == 1) {
        out.push_back(axis.lo);
        break;
      }
      for (std::size_t i = 0; i < axis.count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(axis.count - 1);
        out.push_back(i + 1 == axis.count ? axis.hi : axis.lo + t * (axis.hi - axis.lo));
      }
      break;
    case GridAxis::Kind::logarithmic: {
      if (!(axis.lo > 0.0) || !(axis.hi >= axis.lo)) throw bad("log axis needs 0 < lo <= hi");
      if (axis.include_zero) out.push_back(0.0);
      if (axis.count == 1) out.push_back(axis.lo);
      const double a = std::log(axis.lo), b = std::log(axis.hi);
      for (std::size_t i = 0; axis.count > 1 && i < axis.count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(axis.count - 1);
        if (i == 0) out.push_back(axis.lo);
        else if (i + 1 == axis.count) out.push_back(axis.hi);
        else out.push_back(std::exp(a + t * (b - a)));
      }
      break;
    }
    case GridAxis::Kind::range: {
      if (!(axis.step > 0.0)) throw bad("range step must be positive");
      const double span = (axis.hi - axis.lo) / axis.step;
      if (span < 0) break;
      const auto n = static_cast<std::uint64_t>(std::floor(span + 1e-9)) + 1;
      if (n > kMaxGridPoints) throw bad("range has too many values");
      for (std::uint64_t i = 0; i < n; ++i) out.push_back(axis.lo + static_cast<double>(i) * axis.step);
      break;
    }
  }
  for (double v : out)
    if (!std::isfinite(v)) throw bad("non-finite value");
  return out;
}

}  // namespace

ResolvedGrid resolve(const GridSpec& spec, const ProblemDefinition& problem) {
  if (spec.axes.size() != problem.dims())
    throw Error(ErrorCode::dimension_mismatch, "grid has " + std::to_string(spec.axes.size()) +
                                                   " axes but problem " + problem.name + " has " +
                                                   std::to_string(problem.dims()) + " dimensions");
  std::vector<std::vector<double>> axes;
  for (std::size_t d = 0; d < spec.axes.size(); ++d) {
    auto values = expand(spec.axes[d], d);
    const bool counted = spec.axes[d].kind == GridAxis::Kind::linear ||
                         spec.axes[d].kind == GridAxis::Kind::logarithmic;
    for (double& v : values) {
      if (problem.integral[d] && std::floor(v) != v) {
        if (!counted)
          throw Error(ErrorCode::invalid_argument,
                      "grid axis " + std::to_string(d) + ": integral dimension lists non-integer value");
        v = std::round(v);
      }
      if (v < problem.lower[d] || v > problem.upper[d])
        throw Error(ErrorCode::invalid_argument,
                    "grid axis " + std::to_string(d) + ": value outside box bounds");
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    axes.push_back(std::move(values));
  }
  return ResolvedGrid(std::move(axes));
}

GridSpec clip_to_box(const ResolvedGrid& grid, const ProblemDefinition& problem) {
  if (grid.dims() != problem.dims())
    throw Error(ErrorCode::dimension_mismatch, "clip_to_box: grid and problem dimensions differ");
  GridSpec spec;
  for (std::size_t d = 0; d < grid.dims(); ++d) {
    std::vector<double> kept;
    for (double v : grid.axes()[d])
      if (v >= problem.lower[d] && v <= problem.upper[d]) kept.push_back(v);
    spec.axes.push_back(GridAxis::explicit_values(std::move(kept)));
  }
  return spec;
}

}  // namespace moo
