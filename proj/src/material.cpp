// SPDX-License-Identifier: MIT
#include "kls/material.hpp"

#include <algorithm>

namespace kls {

bool MaterialSpec::has_bending() const {
  for (const auto& m : elastic)
    if (!is_membrane(m.kind)) return true;
  for (const auto& b : branches)
    if (b.bending) return true;
  return false;
}

PointResponse evaluate_material(const MaterialSpec& spec, const PointGeometry& g,
                                const std::vector<MaxwellHistory>& committed, double dt,
                                const BranchOptions& options) {
  PointResponse out;
  for (const auto& model : spec.elastic) {
    const Response r = elastic_response(model, g, options.with_tangents);
    out.total.tau += r.tau;
    out.total.M0 += r.M0;
    out.total.tangents += r.tangents;
  }
  out.tau_elastic = out.total.tau;
  out.updated.reserve(spec.branches.size());
  for (std::size_t i = 0; i < spec.branches.size(); ++i) {
    const BranchResponse r = maxwell_response(spec.branches[i], committed[i], g, dt, options);
    out.total.tau += r.tau;
    out.total.M0 += r.M0;
    out.total.tangents += r.tangents;
    out.tau_branch.push_back(r.tau);
    MaxwellHistory h = r.updated;
    const double d = dissipation_increment(spec.branches[i], committed[i], h, g);
    h.dissipation = committed[i].dissipation + d;
    out.dissipation_increment += d;
    out.updated.push_back(h);
    out.max_local_iterations = std::max(out.max_local_iterations, r.report.iterations);
  }
  return out;
}

std::vector<MaxwellHistory> initial_histories(const MaterialSpec& spec, const Mat2& A_con, const Mat2& B_co) {
  return std::vector<MaxwellHistory>(spec.branches.size(), MaxwellHistory::initial(A_con, B_co));
}

}  // namespace kls
