// SPDX-License-Identifier: MIT
#include "kls/analytical.hpp"
#include "kls/point_driver.hpp"
#include "kls/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace kls;

namespace {

ElasticModel membrane(ModelKind kind, double K, double mu) {
  ElasticModel m;
  m.kind = kind;
  m.K = K;
  m.mu = mu;
  return m;
}

MaxwellBranch nh_branch(double K1, double mu1, double eta) {
  MaxwellBranch b;
  b.membrane = BranchMembrane::NeoHookean;
  b.K1 = K1;
  b.mu1 = mu1;
  b.eta_s = eta;
  return b;
}

MaterialSpec balloon_material(double mu, double mu1, double eta) {
  return {{membrane(ModelKind::IncompressibleNeoHookeanMembrane, 0.0, mu)}, {nh_branch(0.0, mu1, eta)}};
}

MaterialSpec sphere_material(const SphereParams& p) {
  ElasticModel h;
  h.kind = ModelKind::HelfrichBending;
  h.k = p.k;
  h.H0 = p.H0;
  MaxwellBranch b = nh_branch(0.0, p.mu1, p.eta_s);
  b.bending = true;
  b.c1 = p.c1;
  b.eta_b = p.eta_b;
  return {{membrane(ModelKind::IncompressibleNeoHookeanMembrane, 0.0, p.mu), h}, {b}};
}

KinematicProgram stretch_program(ProgramKind kind, double lambda_end, double R = 1.0) {
  KinematicProgram p;
  p.kind = kind;
  p.lambda_end = lambda_end;
  p.R = R;
  return p;
}

}  // namespace

TEST_CASE("schedules hold, ramp and jump") {
  const Schedule s({{0.0, 0.0}, {0.0, 0.1}, {1.5, 0.1}, {1.5, 0.2}, {3.0, 0.2}, {4.0, 0.0}});
  CHECK(s(-1.0) == 0.0);
  CHECK(s(0.0) == 0.1);
  CHECK(s(1.0) == 0.1);
  CHECK(s(1.5) == 0.2);
  CHECK(s(3.5) == doctest::Approx(0.1));
  CHECK(s(9.0) == 0.0);
  CHECK_THROWS_AS(Schedule({{1.0, 0.0}, {0.5, 1.0}}), Error);
}

TEST_CASE("balloon stretch pressure tracks the closed form at first order") {
  BalloonParams bp;  // μ1 = μ, η_s = 0.1 μ T0, λ_end = 2
  const MaterialSpec mat = balloon_material(bp.mu, bp.mu1, bp.eta_s);
  const auto prog = stretch_program(ProgramKind::BalloonStretch, bp.lambda_end, bp.R);
  std::vector<double> dts{1e-1, 1e-2, 1e-3}, errs;
  for (double dt : dts) {
    const auto rec = drive(prog, mat, dt, bp.t_end);
    const PointRecord& last = rec.back();
    CHECK(last.t == bp.t_end);
    CHECK(last.lambda1 == doctest::Approx(2.0).epsilon(1e-14));
    errs.push_back(relative_error(last.pressure, balloon_pressure(bp, bp.t_end).p_total));
    // Elastic branch alone has no time discretization error.
    const double p_el = 2.0 * last.sigma_elastic(0, 0) * last.lambda1 / bp.R;
    CHECK(p_el == doctest::Approx(balloon_pressure(bp, bp.t_end).p_el).epsilon(1e-12));
    CHECK(last.ahat[0](0) == doctest::Approx(balloon_pressure(bp, bp.t_end).ahat).epsilon(20 * dt));
  }
  CHECK(fit_order(dts, errs).slope == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("sphere stretch and bend pressure tracks the closed form at first order") {
  SphereParams sp;  // μ = 5k/R², μ1 = μ, c1 = k, η_s = 0.5, η_b = 0.5k, H0 = 1
  const auto prog = stretch_program(ProgramKind::SphereStretchBend, sp.lambda_end, sp.R);
  std::vector<double> dts{1e-1, 1e-2, 1e-3}, errs;
  for (double dt : dts) {
    const auto rec = drive(prog, sphere_material(sp), dt, sp.t_end);
    errs.push_back(relative_error(rec.back().pressure, sphere_pressure(sp, sp.t_end).p_total));
    CHECK(rec.back().bhat[0](0) == doctest::Approx(-sphere_pressure(sp, sp.t_end).bhat / sp.R).epsilon(20 * dt));
  }
  CHECK(fit_order(dts, errs).slope == doctest::Approx(1.0).epsilon(0.1));
  SphereParams flat = sp;
  flat.H0 = 0.0;
  const auto r1 = drive(prog, sphere_material(sp), 1e-2, sp.t_end);
  const auto r0 = drive(prog, sphere_material(flat), 1e-2, sp.t_end);
  for (std::size_t i = 1; i < r1.size(); ++i) CHECK(r1[i].pressure > r0[i].pressure);
}

TEST_CASE("pure shear relaxation decays toward the elastic stress during holds") {
  KinematicProgram p;
  p.kind = ProgramKind::PureShear;
  p.displacement = Schedule({{0.0, 0.0}, {0.0, 0.1}, {1.5, 0.1}, {1.5, 0.2}, {3.0, 0.2}, {4.0, 0.0}});
  const MaterialSpec mat{{membrane(ModelKind::NeoHookeanMembrane, 0.0, 3.0)}, {nh_branch(0.0, 3.0, 1.0)}};
  const auto rec = drive(p, mat, 0.1, 5.0);
  CHECK(rec.size() == 51);
  for (std::size_t i = 2; i < rec.size(); ++i) {
    const double t = rec[i].t;
    const bool hold = (t > 0.15 && t < 1.45) || (t > 1.55 && t < 2.95);
    if (hold) {
      CHECK(rec[i].sigma(1, 1) < rec[i - 1].sigma(1, 1));
      CHECK(rec[i].sigma(1, 1) > rec[i].sigma_elastic(1, 1));
    }
    CHECK(rec[i].split_defect <= 1e-12);
    CHECK(rec[i].local_iterations <= 10);
  }
  // Stress jumps with the imposed displacement at t = 1.5.
  CHECK(rec[15].sigma(1, 1) - rec[14].sigma(1, 1) > 0.5);
  CHECK(std::abs(rec.back().sigma(1, 1)) < 0.05);
}

TEST_CASE("creep under imposed traction grows during holds") {
  KinematicProgram p;
  p.kind = ProgramKind::CreepTraction;
  p.traction = Schedule({{0.0, 1.0}, {1.5, 1.0}, {1.5, 2.0}, {3.0, 2.0}, {3.0, -1.0}, {4.0, -1.0}, {4.0, -1.5}});
  const MaterialSpec mat{{membrane(ModelKind::NeoHookeanMembrane, 3.0, 3.0)}, {nh_branch(3.0, 3.0, 0.1)}};
  const auto rec = drive(p, mat, 0.1, 5.0);
  for (std::size_t i = 1; i < rec.size(); ++i) CHECK(rec[i].traction == doctest::Approx(p.traction(rec[i].t)).epsilon(1e-10));
  for (std::size_t i = 2; i < 15; ++i) CHECK(rec[i].displacement > rec[i - 1].displacement);
  for (std::size_t i = 32; i < 40; ++i) CHECK(rec[i].displacement < rec[i - 1].displacement);
  const MaterialSpec elastic{{membrane(ModelKind::NeoHookeanMembrane, 3.0, 3.0)}, {}};
  const auto e = drive(p, elastic, 0.1, 5.0);
  CHECK(e[10].displacement == doctest::Approx(e[12].displacement).epsilon(1e-12));
  CHECK(rec[14].displacement < e[14].displacement + 1e-12);
}

TEST_CASE("cyclic elastic loading retraces its path and dissipates nothing") {
  KinematicProgram p;
  p.kind = ProgramKind::Cyclic;
  p.omega = 2.0;
  const MaterialSpec mat{{membrane(ModelKind::NeoHookeanMembrane, 0.0, 1.0)}, {}};
  const auto rec = drive(p, mat, M_PI / 2.0 / 200, M_PI / 2.0);
  for (std::size_t i = 0; i <= 100; ++i)
    CHECK(rec[i].sigma(1, 1) == doctest::Approx(rec[200 - i].sigma(1, 1)).epsilon(1e-9).scale(1e-12));
  CHECK(rec.back().dissipation == 0.0);
}

TEST_CASE("frequency sweep is unimodal with an interior maximum") {
  KinematicProgram p;
  p.kind = ProgramKind::Cyclic;
  const MaterialSpec mat{{membrane(ModelKind::NeoHookeanMembrane, 0.0, 1.0)}, {nh_branch(1.0, 1.0, 1.0)}};
  std::vector<double> omegas;
  for (int i = -4; i <= 4; ++i) omegas.push_back(std::pow(10.0, 0.5 * i));
  const auto s = frequency_sweep(p, omegas, mat, 10, 100, 2);
  int peak = 0;
  for (int i = 0; i < static_cast<int>(s.size()); ++i) {
    CHECK(s[i].dissipation > 0.0);
    if (s[i].dissipation > s[peak].dissipation) peak = i;
  }
  CHECK(peak > 0);
  CHECK(peak < static_cast<int>(s.size()) - 1);
  for (int i = 1; i <= peak; ++i) CHECK(s[i].dissipation > s[i - 1].dissipation);
  for (int i = peak + 1; i < static_cast<int>(s.size()); ++i) CHECK(s[i].dissipation < s[i - 1].dissipation);
  const auto serial = frequency_sweep(p, omegas, mat, 10, 100, 1);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(serial[i].dissipation == s[i].dissipation);
}

TEST_CASE("single FE element reproduces the point driver under homogeneous kinematics") {
  const MaterialSpec mat{{membrane(ModelKind::NeoHookeanMembrane, 1.0, 3.0)}, {nh_branch(1.0, 3.0, 0.4)}};
  KinematicProgram p;
  p.kind = ProgramKind::PureShear;
  p.displacement = Schedule::ramp(1.0, 0.3);
  const double dt = 0.1;
  const auto rec = drive(p, mat, dt, 1.0);

  Model model(flat_patch(1.0, 1.0, 2, 2, 1, 1), mat);
  const Mesh& m = model.mesh();
  for (int n = 0; n < m.num_nodes(); ++n) {
    const double X = m.X(n, 0), Y = m.X(n, 1);
    model.dofs().prescribe(n, 0, [X, &p](double t) { return (1.0 / (1.0 + p.displacement(t)) - 1.0) * X; });
    model.dofs().prescribe(n, 1, [Y, &p](double t) { return p.displacement(t) * Y; });
    model.dofs().fix(n, 2);
  }
  int step = 0;
  model.run(dt, 1.0, [&](const StepRecord& r) {
    ++step;
    CHECK(r.t == rec[step].t);
    const auto& ws = model.workspaces()[0];
    const Controls xe = m.element_controls(m.elements[0], model.x());
    for (std::size_t q = 0; q < ws.qp.size(); ++q) {
      const PointOutput o = point_output(ws.qp[q], xe, mat, model.histories()[0][q]);
      CHECK((o.sigma - rec[step].sigma).cwiseAbs().maxCoeff() <= 1e-10);
    }
  });
  CHECK(step == 10);
}

TEST_CASE("program validation") {
  KinematicProgram p;
  p.kind = ProgramKind::Cyclic;
  p.omega = 0.0;
  const MaterialSpec mat{{membrane(ModelKind::NeoHookeanMembrane, 0.0, 1.0)}, {}};
  CHECK_THROWS_AS(drive(p, mat, 0.1, 1.0), Error);
  p.omega = 1.0;
  CHECK_THROWS_AS(drive(p, mat, 0.3, 1.0), Error);
  CHECK(program_kind_from_string("SphereStretchBend") == ProgramKind::SphereStretchBend);
  CHECK_THROWS_AS(program_kind_from_string("Twist"), Error);
}
