// SPDX-License-Identifier: MIT
// Homogeneous material-point simulator: imposes metric and curvature
// programs and runs the constitutive and Maxwell updates without assembly.
#pragma once

#include "kls/material.hpp"
#include "kls/schedule.hpp"

#include <string>
#include <vector>

namespace kls {

enum class ProgramKind { PureShear, PureDilatation, CreepTraction, Cyclic, BalloonStretch, SphereStretchBend };

const char* to_string(ProgramKind kind);
ProgramKind program_kind_from_string(const std::string& name);

// Reference metric is the identity; the sphere program uses B = −I/R.
struct KinematicProgram {
  ProgramKind kind = ProgramKind::PureShear;
  double L0 = 1.0;
  Schedule displacement;          // ū(t) for PureShear and PureDilatation
  Schedule traction;              // nominal edge traction for CreepTraction
  double amplitude = 0.25;        // Cyclic: ū(t) = amplitude · sin(ωt)
  double omega = 1.0;
  double R = 1.0;                 // BalloonStretch, SphereStretchBend
  double lambda_end = 2.0;
  double t_ref = 1.0;             // time at which λ reaches lambda_end

  void validate() const;
};

// Stretches (λ1, λ2) imposed at time t by a displacement-controlled program;
// CreepTraction has no prescribed kinematics and is rejected.
Vec2 imposed_stretches(const KinematicProgram& program, double t);

struct PointRecord {
  double t = 0.0;
  double lambda1 = 1.0, lambda2 = 1.0;  // stretches along a_1 and a_2
  double displacement = 0.0;            // ū_y = (λ2 − 1) L0
  Mat2 sigma = Mat2::Zero(), sigma_elastic = Mat2::Zero(), moment = Mat2::Zero();
  std::vector<Mat2> sigma_branch;
  double J = 1.0, J_el = 1.0, J_in = 1.0, I1 = 2.0, I1_el = 2.0;  // first branch split
  std::vector<Vec3> ahat, bhat;
  double dissipation = 0.0;  // accumulated per reference area
  double pressure = 0.0;     // balloon and sphere programs
  double traction = 0.0;     // nominal edge traction along y
  int local_iterations = 0;
  double split_defect = 0.0;
};

// One record at t = 0 followed by one per step; t_end must be a multiple of dt.
std::vector<PointRecord> drive(const KinematicProgram& program, const MaterialSpec& material, double dt, double t_end);

struct SweepPoint {
  double omega = 0.0, dissipation = 0.0;
};

// Cyclic runs over `cycles` full periods with `steps_per_cycle` steps each.
std::vector<SweepPoint> frequency_sweep(const KinematicProgram& cyclic, const std::vector<double>& omegas,
                                        const MaterialSpec& material, int cycles = 10, int steps_per_cycle = 1000,
                                        int threads = 1);

}  // namespace kls
