// SPDX-License-Identifier: MIT
#include "kls/elastic.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

using namespace kls;

namespace {

std::vector<ElasticModel> all_models() {
  std::vector<ElasticModel> v;
  ElasticModel m;
  m.kind = ModelKind::KoiterMembrane, m.K = 3.0, m.mu = 2.0;
  v.push_back(m);
  m.kind = ModelKind::NeoHookeanMembrane;
  v.push_back(m);
  m.kind = ModelKind::NeoHookeanSplitMembrane;
  v.push_back(m);
  m.kind = ModelKind::IncompressibleNeoHookeanMembrane;
  v.push_back(m);
  m = ElasticModel{};
  m.kind = ModelKind::ConstantSurfaceTension, m.gamma = 1.5;
  v.push_back(m);
  m = ElasticModel{};
  m.kind = ModelKind::KoiterBending, m.c = 0.8;
  v.push_back(m);
  m = ElasticModel{};
  m.kind = ModelKind::HelfrichBending, m.k = 0.7, m.H0 = 0.3;
  v.push_back(m);
  return v;
}

struct RandomState {
  Mat2 a, b, A, B;
};

RandomState random_state(std::mt19937& rng) {
  return {oracle::random_spd(rng), oracle::random_sym(rng), oracle::random_spd(rng), oracle::random_sym(rng)};
}

}  // namespace

TEST_CASE("stress and moment are energy derivatives") {
  std::mt19937 rng(21);
  const double h = 1e-6;
  for (const auto& m : all_models())
    for (int trial = 0; trial < 10; ++trial) {
      const std::string name = to_string(m.kind);
      CAPTURE(name);
      const auto s = random_state(rng);
      const auto g = PointGeometry::make(s.a, s.b, s.A, s.B);
      const auto r = elastic_response(m, g);
      const Mat2 dpsi_da = oracle::fd_gradient(
          [&](const Mat2& x) { return energy_density(m, PointGeometry::make(x, s.b, s.A, s.B)); }, s.a, h);
      const Mat2 dpsi_db = oracle::fd_gradient(
          [&](const Mat2& x) { return energy_density(m, PointGeometry::make(s.a, x, s.A, s.B)); }, s.b, h);
      CHECK(oracle::rel_err(r.tau, 2.0 * dpsi_da) < 1e-7);
      CHECK(oracle::rel_err(r.M0, dpsi_db) < 1e-7);
      CHECK(oracle::rel_err(membrane_stress(m, g), r.tau / g.J) < 1e-14);
      CHECK(oracle::rel_err(bending_moment(m, g), r.M0 / g.J) < 1e-14);
    }
}

TEST_CASE("tangent blocks against finite differences") {
  std::mt19937 rng(22);
  const double h = 1e-6;
  for (const auto& m : all_models())
    for (int trial = 0; trial < 10; ++trial) {
      const std::string name = to_string(m.kind);
      CAPTURE(name);
      const auto s = random_state(rng);
      const auto t = elastic_tangents(m, PointGeometry::make(s.a, s.b, s.A, s.B));
      auto tau_a = [&](const Mat2& x) { return elastic_response(m, PointGeometry::make(x, s.b, s.A, s.B), false).tau; };
      auto tau_b = [&](const Mat2& x) { return elastic_response(m, PointGeometry::make(s.a, x, s.A, s.B), false).tau; };
      auto m0_a = [&](const Mat2& x) { return elastic_response(m, PointGeometry::make(x, s.b, s.A, s.B), false).M0; };
      auto m0_b = [&](const Mat2& x) { return elastic_response(m, PointGeometry::make(s.a, x, s.A, s.B), false).M0; };
      CHECK(oracle::rel_err(t.c, 2.0 * oracle::fd_tensor(tau_a, s.a, h)) < 1e-7);
      CHECK(oracle::rel_err(t.d, oracle::fd_tensor(tau_b, s.b, h)) < 1e-7);
      CHECK(oracle::rel_err(t.e, 2.0 * oracle::fd_tensor(m0_a, s.a, h)) < 1e-7);
      CHECK(oracle::rel_err(t.f, oracle::fd_tensor(m0_b, s.b, h)) < 1e-7);
      // Hyperelastic symmetries.
      CHECK((t.c - t.c.transpose()).norm() < 1e-12);
      CHECK((t.f - t.f.transpose()).norm() < 1e-12);
      CHECK((t.d - t.e.transpose()).norm() < 1e-12);
    }
}

TEST_CASE("membrane models are stress free in the reference configuration") {
  std::mt19937 rng(23);
  for (const auto& m : all_models()) {
    if (m.kind == ModelKind::ConstantSurfaceTension || m.kind == ModelKind::HelfrichBending) continue;
    const Mat2 A = oracle::random_spd(rng), B = oracle::random_sym(rng);
    const auto r = elastic_response(m, PointGeometry::make(A, B, A, B));
    CHECK(r.tau.norm() < 1e-14);
    CHECK(r.M0.norm() < 1e-14);
  }
}

TEST_CASE("Koiter and neo-Hookean membranes share the small strain tangent") {
  std::mt19937 rng(24);
  const Mat2 A = oracle::random_spd(rng), B = Mat2::Zero();
  ElasticModel m;
  m.K = 3.0, m.mu = 2.0;
  std::vector<Tensor4> tangents;
  for (auto k : {ModelKind::KoiterMembrane, ModelKind::NeoHookeanMembrane, ModelKind::NeoHookeanSplitMembrane}) {
    m.kind = k;
    tangents.push_back(elastic_tangents(m, PointGeometry::make(A, B, A, B)).c);
  }
  CHECK((tangents[0] - tangents[1]).norm() < 1e-12);
  // The split model separates bulk and shear, so its A⊗A coefficient is K - μ.
  const Tensor4 split = m.K * outer(A.inverse(), A.inverse()) - m.mu * outer(A.inverse(), A.inverse()) +
                        m.mu * sym_product(A.inverse(), A.inverse());
  CHECK((tangents[2] - split).norm() < 1e-12);
}

TEST_CASE("closed-form stresses for equibiaxial stretch") {
  const Mat2 I = Mat2::Identity(), Z = Mat2::Zero();
  const double lam = 1.3, l2 = lam * lam;
  const auto g = PointGeometry::make(l2 * I, Z, I, Z);
  ElasticModel m;
  m.K = 3.0, m.mu = 2.0;

  m.kind = ModelKind::NeoHookeanMembrane;
  const double nh = (0.5 * m.K * (l2 * l2 - 1.0) / l2 + m.mu * (1.0 - 1.0 / l2)) / l2;
  CHECK((membrane_stress(m, g) - nh * I).norm() < 1e-13);

  m.kind = ModelKind::NeoHookeanSplitMembrane;
  const double split = 0.5 * m.K * (l2 * l2 - 1.0) / (l2 * l2);
  CHECK((membrane_stress(m, g) - split * I).norm() < 1e-13);

  m.kind = ModelKind::IncompressibleNeoHookeanMembrane;
  const double inc = m.mu * (1.0 - 1.0 / (l2 * l2 * l2)) / l2;
  CHECK((membrane_stress(m, g) - inc * I).norm() < 1e-13);

  m.kind = ModelKind::KoiterMembrane;
  const double koiter = (0.5 * m.K * (2.0 * l2 - 2.0) + m.mu * (l2 - 1.0)) / l2;
  CHECK((membrane_stress(m, g) - koiter * I).norm() < 1e-13);

  m = ElasticModel{};
  m.kind = ModelKind::ConstantSurfaceTension, m.gamma = 0.9;
  CHECK((membrane_stress(m, g) - 0.9 * g.a_con).norm() < 1e-14);
}

TEST_CASE("split neo-Hookean shear part is isochoric") {
  const Mat2 I = Mat2::Identity(), Z = Mat2::Zero();
  ElasticModel m;
  m.kind = ModelKind::NeoHookeanSplitMembrane, m.K = 0.0, m.mu = 2.0;
  for (double lam : {0.8, 1.0, 1.7}) {
    const auto g = PointGeometry::make(lam * lam * I, Z, I, Z);
    CHECK(membrane_stress(m, g).norm() < 1e-14);
  }
}

TEST_CASE("bending moments on a cylinder and a sphere") {
  const Mat2 I = Mat2::Identity();
  ElasticModel koiter;
  koiter.kind = ModelKind::KoiterBending, koiter.c = 2.0;
  Mat2 b = Mat2::Zero();
  b(1, 1) = 0.5;
  const auto cyl = PointGeometry::make(I, b, I, Mat2::Zero());
  const Mat2 M = bending_moment(koiter, cyl);
  CHECK(M(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(M(0, 0)) < 1e-14);

  ElasticModel helfrich;
  helfrich.kind = ModelKind::HelfrichBending, helfrich.k = 1.0, helfrich.H0 = -1.0;
  const auto sphere = PointGeometry::make(I, -I, I, -I);
  const auto r = elastic_response(helfrich, sphere);
  CHECK(r.M0.norm() < 1e-14);
  CHECK(r.tau.norm() < 1e-14);
  CHECK(energy_density(helfrich, sphere) == 0.0);
}

TEST_CASE("model names round trip and invalid input is rejected") {
  for (const auto& m : all_models()) CHECK(model_kind_from_string(to_string(m.kind)) == m.kind);
  CHECK_THROWS_AS(model_kind_from_string("Rubber"), Error);
  Mat2 bad;
  bad << 1, 2, 2, 1;
  CHECK_THROWS_AS(PointGeometry::make(bad, Mat2::Zero(), Mat2::Identity(), Mat2::Zero()), Error);
  CHECK(is_membrane(ModelKind::ConstantSurfaceTension));
  CHECK_FALSE(is_membrane(ModelKind::HelfrichBending));
}
