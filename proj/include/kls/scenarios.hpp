// SPDX-License-Identifier: MIT
// Finite element problem builders and measurements for the benchmark cases:
// homogeneous membrane patches, the pure-bending strip and the Scordelis-Lo roof.
#pragma once

#include "kls/analytical.hpp"
#include "kls/point_driver.hpp"
#include "kls/schedule.hpp"
#include "kls/solver.hpp"

#include <functional>

namespace kls {

// Physical point of the current configuration at parameters (ξ, η).
Vec3 surface_at(const Mesh& mesh, const Controls& x, double xi, double eta);

// Area-weighted means over all quadrature points of the committed state.
struct FieldAverage {
  Mat2 sigma = Mat2::Zero(), moment = Mat2::Zero();
  double J = 1.0, area = 0.0;
};
FieldAverage average_fields(const Model& model);

// Flat square patch [0, L0]² whose boundary control points follow the
// homogeneous map (x, y) → (λ1 x, λ2 y); interior points are free in-plane
// and every point is held in z.
void prescribe_homogeneous_stretch(Model& model, std::function<Vec2(double)> stretch);

// Roller supports on xi_min (x) and eta_min (y), z held everywhere, and a dead
// nominal traction t(t) on xi_max (along x) and eta_max (along y).
void equibiaxial_traction(Model& model, Schedule traction);

// Incompressible Neo-Hookean membrane with one Neo-Hookean Maxwell branch (K1 = 0).
MaterialSpec balloon_material(const BalloonParams& p);
KinematicProgram balloon_program(const BalloonParams& p);
// Balloon membrane plus Helfrich bending and a Koiter bending spring in the branch.
MaterialSpec sphere_material(const SphereParams& p);
KinematicProgram sphere_program(const SphereParams& p);

// Flat square patch [0, L0]² of m × m quadratic elements. Displacement
// programs are imposed through the boundary control points; CreepTraction
// applies its nominal traction on the xi_max and eta_max edges.
Model make_membrane_patch(const KinematicProgram& program, const MaterialSpec& material, int m);

struct PureBendCase {
  PureBendParams params;
  double L = 1.0;             // width along the unbent direction
  double mu = 10.0, K = 5.0;  // elastic Neo-Hookean membrane
  int mx = 2, my = 16;
};

MaterialSpec pure_bend_material(const PureBendCase& c);
// Edges eta_min and eta_max carry the moment M(t); eta_min is held in y and
// z, eta_max moves by ū_y(t) in y and is held in z; one corner is held in x;
// the follower pressure p(t) acts on the whole strip.
Model make_pure_bend(const PureBendCase& c);

// b^2_2 and the first branch's b̂^2_2 at every quadrature point, element by element.
struct BendField {
  std::vector<double> kappa, kappa_in, weight;
};
BendField pure_bend_field(const Model& model);

struct BendMeasure {
  double kappa = 0.0, kappa_in = 0.0;          // area-weighted means of b^2_2 and b̂^2_2
  double eps_kappa = 0.0, eps_kappa_in = 0.0;  // largest pointwise relative errors
  double stretch_deviation = 0.0;              // max |λ_i − 1| over quadrature points
};
BendMeasure measure_pure_bend(const Model& model, const PureBendParams& p, double t);

struct ScordelisCase {
  double R = 25.0, L = 50.0, half_angle_deg = 40.0;
  int mx = 8, my = 8;
  double f0 = 1.0, t0 = 10.0;  // dead load f_v = f0 min(t/t0, 1) / 25 per reference area
  MaterialSpec material;
};

// Rigid diaphragms (u_y = u_z = 0) on the curved ends x = 0 and x = L and one
// point held in x.
Model make_scordelis(const ScordelisCase& c);
// Vertical displacement at the centre of the roof.
double scordelis_center_deflection(const Model& model);

}  // namespace kls
