// SPDX-License-Identifier: MIT
#include "kls/schedule.hpp"

#include "kls/types.hpp"

#include <cmath>

namespace kls {

Schedule::Schedule(std::vector<std::pair<double, double>> points) : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].first) || !std::isfinite(points_[i].second))
      throw Error(ErrorKind::ParameterError, "schedule breakpoints must be finite");
    if (i > 0 && points_[i].first < points_[i - 1].first)
      throw Error(ErrorKind::ParameterError, "schedule times must be nondecreasing");
  }
}

double Schedule::operator()(double t) const {
  if (points_.empty()) return 0.0;
  if (t < points_.front().first) return points_.front().second;
  // Last breakpoint with time <= t, so a jump takes its post-jump value.
  std::size_t i = 0;
  while (i + 1 < points_.size() && points_[i + 1].first <= t) ++i;
  if (i + 1 == points_.size()) return points_.back().second;
  const auto& [t0, v0] = points_[i];
  const auto& [t1, v1] = points_[i + 1];
  return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

}  // namespace kls
