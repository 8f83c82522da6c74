// SPDX-License-Identifier: MIT
// Kirchhoff-Love shell element: quadrature data, internal and external force
// vectors, consistent stiffness and the L2 projection onto control points.
#pragma once

#include "kls/material.hpp"
#include "kls/mesh.hpp"

#include <vector>

namespace kls {

using Controls = Eigen::Matrix<double, Eigen::Dynamic, 3>;

struct QuadPoint {
  BasisEval basis;
  double weight = 0.0;  // Gauss weight times parametric cell area
  double dA = 0.0;      // weight times reference area element
  Mat2 A_co, A_con, B_co;
  Vec3 X;
};

// Boundary quadrature point on an element edge.
struct EdgePoint {
  BasisEval basis;
  double weight = 0.0;      // Gauss weight times parametric edge length
  double ref_length = 0.0;  // weight times the reference length element
  Side side = Side::EtaMin;
  int fixed = 1;     // index of the parameter that is constant along the edge
  double sign = 1.0;  // +1 if the outward normal points toward increasing parameter
};

struct ElementWorkspace {
  int element = 0;
  std::vector<int> nodes;
  std::vector<QuadPoint> qp;
  std::vector<EdgePoint> edges;  // points on every boundary edge of this element
};

// (p+1) x (q+1) Gauss points per element and p+1 (or q+1) per boundary edge.
std::vector<ElementWorkspace> build_workspaces(const Mesh& mesh);

struct EdgeLoad {
  Side side = Side::EtaMin;
  double moment = 0.0;            // normal bending moment M^{αβ}ν_αν_β per unit current length
  Vec3 traction = Vec3::Zero();   // dead traction per unit reference length
};

struct Loads {
  double pressure = 0.0;            // follower pressure along the current normal
  Vec2 tangential = Vec2::Zero();   // follower body force f^α a_α per current area
  Vec3 dead = Vec3::Zero();         // fixed body force per reference area
  std::vector<EdgeLoad> edges;

  bool empty() const;
};

struct ElementOptions {
  bool with_stiffness = true;
  bool drop_sensitivity = false;
  bool monitor_split = false;
};

struct ElementResult {
  Eigen::VectorXd f_int, f_ext;
  Eigen::MatrixXd k;  // ∂(f_int - f_ext)/∂x
  std::vector<std::vector<MaxwellHistory>> updated;  // per quadrature point
  double dissipation_increment = 0.0;
  int max_local_iterations = 0;
  double max_split_defect = 0.0;
};

// Evaluates one element; histories are indexed [quadrature point][branch].
// Errors thrown by the material are rethrown with the element id prefixed.
ElementResult evaluate_element(const ElementWorkspace& ws, const Controls& x, const MaterialSpec& material,
                               const std::vector<std::vector<MaxwellHistory>>& committed, const Loads& loads,
                               double dt, const ElementOptions& options = {});

// Current geometry, Cauchy stress σ and moment M at one quadrature point for
// the given (already updated) intermediate states.
struct PointOutput {
  Mat2 a_co, b_co, sigma, moment;
  double J = 1.0, H = 0.0;
  Vec3 x, n;
};
PointOutput point_output(const QuadPoint& q, const Controls& x, const MaterialSpec& material,
                         const std::vector<MaxwellHistory>& histories);

// Least-squares projection of quadrature values onto control-point coefficients.
Eigen::VectorXd l2_project(const Mesh& mesh, const std::vector<ElementWorkspace>& ws,
                           const std::vector<std::vector<double>>& values);

}  // namespace kls
