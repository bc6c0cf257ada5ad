#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pairlab/common.hpp"

namespace pairlab {

// Sorted union of pairwise disjoint closed intervals on the line.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  explicit IntervalUnion(std::vector<std::pair<double, double>> iv);

  static IntervalUnion single(double a, double b) {
    return IntervalUnion({{a, b}});
  }

  const std::vector<std::pair<double, double>>& intervals() const {
    return iv_;
  }
  bool empty() const { return iv_.empty(); }
  size_t count() const { return iv_.size(); }
  double measure() const;
  double measure_within(double a, double b) const;
  double min() const { return iv_.empty() ? 0.0 : iv_.front().first; }
  double max() const { return iv_.empty() ? 0.0 : iv_.back().second; }

  enum class Where { Inside, Outside, Boundary };
  Where locate(double t, double tol = kGeomTol) const;

  IntervalUnion unite(const IntervalUnion& o) const;
  IntervalUnion intersect(const IntervalUnion& o) const;
  IntervalUnion subtract(const IntervalUnion& o) const;
  IntervalUnion clip(double a, double b) const;
  IntervalUnion complement_within(double a, double b) const;
  // affine image t -> a + b*t (b may be negative)
  IntervalUnion affine(double a, double b) const;

 private:
  void normalize();
  std::vector<std::pair<double, double>> iv_;
};

}  // namespace pairlab
