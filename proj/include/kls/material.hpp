// SPDX-License-Identifier: MIT
// Generalized viscoelastic solid: elastic branch plus any number of Maxwell branches.
#pragma once

#include "kls/elastic.hpp"
#include "kls/maxwell.hpp"

#include <vector>

namespace kls {

struct MaterialSpec {
  std::vector<ElasticModel> elastic;  // e.g. one membrane and one bending model
  std::vector<MaxwellBranch> branches;

  bool has_bending() const;
};

struct PointResponse {
  Response total;  // τ, M0 and tangents summed over all branches
  Mat2 tau_elastic = Mat2::Zero();
  std::vector<Mat2> tau_branch;  // Kirchhoff stress per Maxwell branch
  std::vector<MaxwellHistory> updated;
  double dissipation_increment = 0.0;
  int max_local_iterations = 0;
};

// Evaluates the constitutive response at a point, re-running every local update
// from the committed histories.
PointResponse evaluate_material(const MaterialSpec& spec, const PointGeometry& g,
                                const std::vector<MaxwellHistory>& committed, double dt,
                                const BranchOptions& options = {});

std::vector<MaxwellHistory> initial_histories(const MaterialSpec& spec, const Mat2& A_con, const Mat2& B_co);

}  // namespace kls
