#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "moo/core.hpp"

namespace moo {

/// Sample values along one resource dimension, in problem units.
struct GridAxis {
  enum class Kind { values, linear, logarithmic, range };

  Kind kind = Kind::values;
  std::vector<double> values;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  double step = 1.0;
  bool include_zero = false;

  static GridAxis explicit_values(std::vector<double> values);
  static GridAxis linear(double lo, double hi, std::size_t count);
  /// count points geometrically spaced in [lo, hi], optionally plus 0.
  static GridAxis logarithmic(double lo, double hi, std::size_t count, bool include_zero);
  static GridAxis range(double lo, double hi, double step);
};

struct GridSpec {
  std::vector<GridAxis> axes;

  /// count linearly spaced values on every dimension of the problem's box.
  static GridSpec uniform(const ProblemDefinition& problem, std::size_t count);
};

/// Explicit sorted, de-duplicated per-dimension values.
class ResolvedGrid {
 public:
  ResolvedGrid() = default;
  explicit ResolvedGrid(std::vector<std::vector<double>> axes);

  const std::vector<std::vector<double>>& axes() const noexcept { return axes_; }
  std::size_t dims() const noexcept { return axes_.size(); }
  std::uint64_t size() const noexcept { return size_; }

  /// Decodes a linear index; dimension 0 varies slowest, so increasing
  /// index is increasing lexicographic order of x.
  void point(std::uint64_t index, std::span<double> x) const;

  /// Grid spacing around value v on dimension d (the wider bracketing gap).
  double spacing(std::size_t d, double v) const;

 private:
  std::vector<std::vector<double>> axes_;
  std::uint64_t size_ = 0;
};

inline constexpr std::uint64_t kMaxGridPoints = std::uint64_t{1} << 36;

/// Validates against the problem's box and integrality and expands to
/// explicit values. Throws invalid_argument on out-of-box or fractional
/// values on integral dimensions, and on size overflow.
ResolvedGrid resolve(const GridSpec& spec, const ProblemDefinition& problem);

/// Explicit-value copy of a resolved grid keeping only the values inside the
/// problem's box. Used to reuse one discretization on a tightened bundle.
GridSpec clip_to_box(const ResolvedGrid& grid, const ProblemDefinition& problem);

}  // namespace moo
