// SPDX-License-Identifier: MIT
#include "kls/studies.hpp"

#include <doctest.h>

#include <cmath>

using namespace kls;

namespace {

MaterialSpec nh_material(double eta) {
  ElasticModel e;
  e.kind = ModelKind::NeoHookeanMembrane;
  e.mu = 3.0;
  e.K = 1.0;
  MaxwellBranch b;
  b.membrane = BranchMembrane::NeoHookean;
  b.mu1 = 3.0;
  b.K1 = 1.0;
  b.eta_s = eta;
  return {{e}, {b}};
}

}  // namespace

TEST_CASE("imposed stretches of the displacement programs") {
  KinematicProgram p;
  p.kind = ProgramKind::PureShear;
  p.displacement = Schedule::ramp(1.0, 0.25);
  Vec2 l = imposed_stretches(p, 1.0);
  CHECK(l(1) == doctest::Approx(1.25));
  CHECK(l(0) * l(1) == doctest::Approx(1.0));

  p.kind = ProgramKind::PureDilatation;
  l = imposed_stretches(p, 1.0);
  CHECK(l(0) == doctest::Approx(1.25));
  CHECK(l(1) == doctest::Approx(1.25));

  p.kind = ProgramKind::BalloonStretch;
  p.lambda_end = 2.0;
  CHECK(imposed_stretches(p, 0.5)(0) == doctest::Approx(std::sqrt(2.0)));

  p.kind = ProgramKind::CreepTraction;
  CHECK_THROWS_AS(imposed_stretches(p, 0.5), Error);
}

TEST_CASE("membrane patch under a homogeneous program matches the point driver") {
  KinematicProgram p;
  p.kind = ProgramKind::PureDilatation;
  p.displacement = Schedule::ramp(1.0, 0.2);
  const MaterialSpec mat = nh_material(0.5);
  const auto rec = drive(p, mat, 0.1, 1.0);
  Model model = make_membrane_patch(p, mat, 3);
  model.run(0.1, 1.0);
  const FieldAverage avg = average_fields(model);
  CHECK((avg.sigma - rec.back().sigma).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(avg.area == doctest::Approx(1.0));
  CHECK(avg.J == doctest::Approx(1.44));
}

TEST_CASE("equibiaxial creep patch stretches during a traction hold") {
  KinematicProgram p;
  p.kind = ProgramKind::CreepTraction;
  p.traction = Schedule::constant(1.0);
  Model model = make_membrane_patch(p, nh_material(1.0), 2);
  double prev = 0.0;
  model.run(0.25, 2.0, [&](const StepRecord&) {
    const double J = average_fields(model).J;
    CHECK(J > prev);
    prev = J;
  });
}

TEST_CASE("pure bending strip follows the closed-form curvature") {
  PureBendCase c;
  c.mx = 2;
  c.my = 16;
  Model model = make_pure_bend(c);
  model.run(0.1, 1.0);
  const BendMeasure m = measure_pure_bend(model, c.params, 1.0);
  const PureBendState exact = pure_bend_solution(c.params, 1.0);
  CHECK(m.kappa == doctest::Approx(exact.kappa).epsilon(0.03));
  CHECK(m.kappa_in == doctest::Approx(exact.kappa_in).epsilon(0.1));
  CHECK(m.stretch_deviation < 1e-2);
}

TEST_CASE("pure bending errors shrink with the time step") {
  PureBendCase c;
  c.mx = 2;
  c.my = 8;
  const Study s = pure_bend_time_study(c, {0.2, 0.1});
  REQUIRE(s.rows.size() == 2);
  CHECK(s.rows[1].error < s.rows[0].error);
  CHECK(s.rows[1].error_in < s.rows[0].error_in);
}

TEST_CASE("Scordelis-Lo roof sags under its dead load") {
  ScordelisCase c;
  c.mx = c.my = 4;
  ElasticModel nh, kb;
  nh.kind = ModelKind::NeoHookeanMembrane;
  nh.mu = nh.K = 10.0;
  kb.kind = ModelKind::KoiterBending;
  kb.c = 10.0;
  c.material = {{nh, kb}, {}};
  Model model = make_scordelis(c);
  CHECK(scordelis_center_deflection(model) == 0.0);
  double prev = 0.0;
  model.run(2.5, 10.0, [&](const StepRecord&) {
    const double w = scordelis_center_deflection(model);
    CHECK(w < prev);
    prev = w;
  });
}

TEST_CASE("balloon mesh study is insensitive to the element count") {
  const Study s = balloon_mesh_study(BalloonParams{}, {1, 2}, 0.05);
  REQUIRE(s.rows.size() == 2);
  CHECK(std::abs(s.rows[1].error - s.rows[0].error) < 0.01 * s.rows[0].error);
}
