// SPDX-License-Identifier: MIT
// Convergence studies against the closed-form solutions: relative errors at
// the end time over a list of time steps or meshes, with fitted orders.
#pragma once

#include "kls/scenarios.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kls {

struct StudyRow {
  double dt = 0.0;
  int mx = 0, my = 0;  // zero for point-driver rows
  double error = 0.0;              // ε at t_end
  double error_in = 0.0;           // inelastic counterpart (ε_κ^in for bending), zero if not defined
  double stretch_deviation = 0.0;  // largest |λ_i − 1| over all steps (pure bending)
  double seconds = 0.0;

  int elements() const { return mx * my; }
};

struct Study {
  std::string name;
  bool over_mesh = false;       // abscissa is the element count instead of Δt
  std::vector<StudyRow> rows;
  std::optional<OrderFit> order, order_in;  // slopes of log ε against log Δt or log(1/n_el)
};

// Pressure error of the point driver against the closed form.
Study balloon_time_study(const BalloonParams& p, const std::vector<double>& dts);
Study sphere_time_study(const SphereParams& p, const std::vector<double>& dts);

// FE membrane patches of m × m elements under the balloon stretch history.
Study balloon_mesh_study(const BalloonParams& p, const std::vector<int>& ms, double dt);

// Largest relative curvature errors over the quadrature points at t_end.
Study pure_bend_time_study(const PureBendCase& c, const std::vector<double>& dts);
// With `extrapolate`, each mesh is run at dt and dt/2 and the curvature field is
// Richardson-extrapolated in time, which removes the first-order time error
// from the spatial error.
Study pure_bend_mesh_study(const PureBendCase& c, const std::vector<std::pair<int, int>>& meshes, double dt,
                           bool extrapolate = true);

}  // namespace kls
