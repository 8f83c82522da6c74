// SPDX-License-Identifier: MIT
// Piecewise-linear time functions with jumps, used for imposed displacements,
// tractions and load factors.
#pragma once

#include <utility>
#include <vector>

namespace kls {

// Breakpoints (t_i, v_i) with nondecreasing t. Repeating a time encodes a
// jump; the value at a jump time is the one after the jump. Values are held
// constant outside the breakpoint range.
class Schedule {
 public:
  Schedule() = default;
  explicit Schedule(std::vector<std::pair<double, double>> points);
  static Schedule constant(double v) { return Schedule({{0.0, v}}); }
  static Schedule ramp(double t_end, double v_end) { return Schedule({{0.0, 0.0}, {t_end, v_end}}); }

  double operator()(double t) const;
  const std::vector<std::pair<double, double>>& points() const { return points_; }
  bool empty() const { return points_.empty(); }

 private:
  std::vector<std::pair<double, double>> points_;
};

}  // namespace kls
