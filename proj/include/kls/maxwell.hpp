// SPDX-License-Identifier: MIT
// Maxwell branches: implicit-Euler evolution of the intermediate metric and
// curvature, branch stresses and moments, consistent tangents and dissipation.
#pragma once

#include "kls/elastic.hpp"
#include "kls/types.hpp"

#include <string>

namespace kls {

enum class BranchMembrane { None, Koiter, NeoHookean, NeoHookeanSplit, Incompressible, SurfaceTension };

const char* to_string(BranchMembrane kind);
BranchMembrane branch_membrane_from_string(const std::string& name);

struct MaxwellBranch {
  BranchMembrane membrane = BranchMembrane::None;
  double K1 = 0.0, mu1 = 0.0, gamma1 = 0.0;
  bool bending = false;  // Koiter bending spring with modulus c1
  double c1 = 0.0;
  double eta_s = 0.0, eta_b = 0.0;
};

// Intermediate metric â^{αβ} and curvature b̂_{αβ} in [11, 12, 22] storage.
struct MaxwellHistory {
  Vec3 ahat = Vec3(1.0, 0.0, 1.0);
  Vec3 bhat = Vec3::Zero();
  double dissipation = 0.0;

  static MaxwellHistory initial(const Mat2& A_con, const Mat2& B_co) {
    return {to_voigt(A_con), to_voigt(B_co), 0.0};
  }
};

// Branch spring response in the intermediate configuration: σ̂ = J_el σ1 and
// its derivatives with respect to â^{γδ} and a_{γδ}.
struct SpringEval {
  Mat2 sigma_hat = Mat2::Zero();
  Tensor4 d_ahat = Tensor4::Zero();
  Tensor4 d_a = Tensor4::Zero();
  double J_el = 1.0;
};

SpringEval spring(const MaxwellBranch& branch, const Mat2& a_co, const Mat2& ahat_con);

Vec3 residual_surface(const MaxwellBranch& branch, const Vec3& ahat_new, const Vec3& ahat_n, const Mat2& a_co,
                      double dt);
Mat3 jacobian_surface(const MaxwellBranch& branch, const Vec3& ahat_new, const Mat2& a_co, double dt);

struct LocalReport {
  int iterations = 0;
  double step_norm = 0.0;
  bool closed_form = false;
};

// Closed form for the Neo-Hookean spring with K1 = 0 and for surface tension,
// local Newton from â_n otherwise.
Vec3 update_intermediate_metric(const MaxwellBranch& branch, const Vec3& ahat_n, const Mat2& a_co, double dt,
                                LocalReport* report = nullptr, bool force_newton = false);

Vec3 update_intermediate_curvature(const MaxwellBranch& branch, const Vec3& bhat_n, const Mat2& b_co, double dt);

// Cauchy stress σ1 and moment M1 for given intermediate quantities.
struct BranchStress {
  Mat2 sigma = Mat2::Zero(), moment = Mat2::Zero();
};
BranchStress maxwell_stress_and_moment(const MaxwellBranch& branch, const Vec3& ahat, const Vec3& bhat,
                                       const PointGeometry& g);

struct BranchOptions {
  bool with_tangents = true;
  bool drop_sensitivity = false;  // omit ∂â/∂a and ∂b̂/∂b in the tangent (deliberately defective)
  bool force_newton = false;
};

// Full local step: updated history plus τ1, M0_1 and c1, d1, e1, f1.
struct BranchResponse {
  Mat2 tau = Mat2::Zero(), M0 = Mat2::Zero();
  TangentBlocks tangents;
  MaxwellHistory updated;
  double J_el = 1.0, J_in = 1.0;
  LocalReport report;
};

BranchResponse maxwell_response(const MaxwellBranch& branch, const MaxwellHistory& committed, const PointGeometry& g,
                                double dt, const BranchOptions& options = {});

TangentBlocks maxwell_tangents(const MaxwellBranch& branch, const MaxwellHistory& committed, const PointGeometry& g,
                               double dt);

// Dissipated energy per reference area over one step (backward rectangle rule).
double dissipation_increment(const MaxwellBranch& branch, const MaxwellHistory& previous,
                             const MaxwellHistory& updated, const PointGeometry& g);

}  // namespace kls
