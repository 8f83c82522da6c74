// SPDX-License-Identifier: MIT
#include "kls/kinematics.hpp"
#include "kls/material.hpp"
#include "kls/maxwell.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

using namespace kls;

namespace {

std::vector<MaxwellBranch> all_branches() {
  std::vector<MaxwellBranch> v;
  MaxwellBranch b;
  b.K1 = 2.0, b.mu1 = 1.5, b.eta_s = 0.7;
  for (auto k : {BranchMembrane::Koiter, BranchMembrane::NeoHookean, BranchMembrane::NeoHookeanSplit,
                 BranchMembrane::Incompressible}) {
    b.membrane = k;
    v.push_back(b);
  }
  b.membrane = BranchMembrane::NeoHookean, b.K1 = 0.0;
  v.push_back(b);
  b = MaxwellBranch{};
  b.membrane = BranchMembrane::SurfaceTension, b.gamma1 = 0.8, b.eta_s = 1.1;
  v.push_back(b);
  b = MaxwellBranch{};
  b.bending = true, b.c1 = 1.3, b.eta_b = 0.4;
  v.push_back(b);
  b.membrane = BranchMembrane::NeoHookeanSplit, b.K1 = 1.0, b.mu1 = 2.0, b.eta_s = 0.9;
  v.push_back(b);
  return v;
}

std::string describe(const MaxwellBranch& b) { return std::string(to_string(b.membrane)) + (b.bending ? "+bend" : ""); }

// Committed history near the reference state so that the local problems stay well posed.
MaxwellHistory perturbed_history(std::mt19937& rng, const Mat2& A, const Mat2& B) {
  MaxwellHistory h = MaxwellHistory::initial(A.inverse(), B);
  h.ahat += to_voigt(oracle::random_sym(rng, 0.1));
  h.bhat += to_voigt(oracle::random_sym(rng, 0.1));
  return h;
}

}  // namespace

TEST_CASE("local Jacobian against finite differences of the residual") {
  std::mt19937 rng(31);
  const double h = 1e-6;
  for (const auto& b : all_branches()) {
    if (b.membrane == BranchMembrane::None) continue;
    const std::string name = describe(b);
    CAPTURE(name);
    for (int trial = 0; trial < 10; ++trial) {
      const Mat2 a = oracle::random_spd(rng);
      const Vec3 ahat = to_voigt(oracle::random_spd(rng)), ahat_n = to_voigt(oracle::random_spd(rng));
      const double dt = 0.3;
      Mat3 fd;
      for (int k = 0; k < 3; ++k) {
        Vec3 e = Vec3::Zero();
        e(k) = h;
        fd.col(k) = (residual_surface(b, ahat + e, ahat_n, a, dt) - residual_surface(b, ahat - e, ahat_n, a, dt)) / (2 * h);
      }
      CHECK(oracle::rel_err(jacobian_surface(b, ahat, a, dt), fd) < 1e-7);
    }
  }
}

TEST_CASE("spring derivatives with respect to the current metric") {
  std::mt19937 rng(32);
  for (const auto& b : all_branches()) {
    const std::string name = describe(b);
    CAPTURE(name);
    const Mat2 a = oracle::random_spd(rng), ahat = oracle::random_spd(rng);
    const Tensor4 fd =
        oracle::fd_tensor([&](const Mat2& x) { return spring(b, x, ahat).sigma_hat; }, a, 1e-6);
    CHECK(oracle::rel_err(spring(b, a, ahat).d_a, fd) < 1e-7);
  }
}

TEST_CASE("closed-form local updates agree with Newton") {
  std::mt19937 rng(33);
  for (const auto& b : all_branches()) {
    const bool closed = (b.membrane == BranchMembrane::NeoHookean && b.K1 == 0.0) ||
                        b.membrane == BranchMembrane::SurfaceTension;
    if (!closed) continue;
    const std::string name = describe(b);
    CAPTURE(name);
    for (int trial = 0; trial < 10; ++trial) {
      const Mat2 a = oracle::random_spd(rng);
      const Vec3 ahat_n = to_voigt(oracle::random_spd(rng));
      LocalReport rc, rn;
      const Vec3 c = update_intermediate_metric(b, ahat_n, a, 0.2, &rc);
      const Vec3 n = update_intermediate_metric(b, ahat_n, a, 0.2, &rn, true);
      CHECK(rc.closed_form);
      CHECK_FALSE(rn.closed_form);
      CHECK(rn.iterations <= 25);
      CHECK((c - n).norm() < 1e-12);
      CHECK(residual_surface(b, c, ahat_n, a, 0.2).norm() < 1e-10);
    }
  }
}

TEST_CASE("Newton update solves the residual in few iterations") {
  std::mt19937 rng(34);
  for (const auto& b : all_branches()) {
    if (b.membrane == BranchMembrane::None) continue;
    const std::string name = describe(b);
    CAPTURE(name);
    const Mat2 A = oracle::random_spd(rng);
    const Mat2 a = A * 1.3 + 0.1 * oracle::random_sym(rng);
    LocalReport rep;
    const Vec3 ahat = update_intermediate_metric(b, to_voigt(A.inverse()), a, 0.1, &rep, true);
    CHECK(residual_surface(b, ahat, to_voigt(A.inverse()), a, 0.1).norm() < 1e-8);
    CHECK(rep.iterations < 10);
  }
}

TEST_CASE("consistent tangents through the local update") {
  std::mt19937 rng(35);
  const double h = 1e-6, dt = 0.25;
  for (const auto& b : all_branches()) {
    const std::string name = describe(b);
    CAPTURE(name);
    for (int trial = 0; trial < 8; ++trial) {
      const Mat2 A = oracle::random_spd(rng), B = oracle::random_sym(rng);
      const Mat2 a = A + oracle::random_sym(rng, 0.2), bc = B + oracle::random_sym(rng, 0.2);
      const MaxwellHistory hist = perturbed_history(rng, A, B);
      auto resp = [&](const Mat2& x, const Mat2& y) {
        return maxwell_response(b, hist, PointGeometry::make(x, y, A, B), dt, {false, false, false});
      };
      const auto r = maxwell_response(b, hist, PointGeometry::make(a, bc, A, B), dt);
      const Tensor4 c = 2.0 * oracle::fd_tensor([&](const Mat2& x) { return resp(x, bc).tau; }, a, h);
      const Tensor4 d = oracle::fd_tensor([&](const Mat2& y) { return resp(a, y).tau; }, bc, h);
      const Tensor4 e = 2.0 * oracle::fd_tensor([&](const Mat2& x) { return resp(x, bc).M0; }, a, h);
      const Tensor4 f = oracle::fd_tensor([&](const Mat2& y) { return resp(a, y).M0; }, bc, h);
      CHECK(oracle::rel_err(r.tangents.c, c) < 1e-6);
      CHECK(oracle::rel_err(r.tangents.d, d) < 1e-6);
      CHECK(oracle::rel_err(r.tangents.e, e) < 1e-6);
      CHECK(oracle::rel_err(r.tangents.f, f) < 1e-6);
      CHECK(oracle::rel_err(maxwell_tangents(b, hist, PointGeometry::make(a, bc, A, B), dt).c, r.tangents.c) < 1e-14);
    }
  }
}

TEST_CASE("dropping the sensitivity gives a detectably wrong tangent") {
  std::mt19937 rng(36);
  MaxwellBranch b;
  b.membrane = BranchMembrane::NeoHookeanSplit, b.K1 = 2.0, b.mu1 = 3.0, b.eta_s = 0.2;
  const Mat2 A = Mat2::Identity(), B = Mat2::Zero();
  const Mat2 a = 1.2 * A + oracle::random_sym(rng, 0.1);
  const MaxwellHistory hist = MaxwellHistory::initial(A, B);
  const auto g = PointGeometry::make(a, B, A, B);
  const auto good = maxwell_response(b, hist, g, 0.5);
  const auto bad = maxwell_response(b, hist, g, 0.5, {true, true, false});
  CHECK(oracle::rel_err(bad.tangents.c, good.tangents.c) > 1e-2);
  CHECK(oracle::rel_err(bad.tau, good.tau) < 1e-15);
}

TEST_CASE("split identities hold after the local update") {
  std::mt19937 rng(37);
  for (const auto& b : all_branches()) {
    const std::string name = describe(b);
    CAPTURE(name);
    const Mat2 A = oracle::random_spd(rng), B = oracle::random_sym(rng);
    const Mat2 a = A + oracle::random_sym(rng, 0.2), bc = B + oracle::random_sym(rng, 0.2);
    const auto g = PointGeometry::make(a, bc, A, B);
    const auto r = maxwell_response(b, perturbed_history(rng, A, B), g, 0.3);
    const auto s = split_quantities(a, A, from_voigt(r.updated.ahat), bc, B, from_voigt(r.updated.bhat));
    CHECK(std::abs(s.J - s.J_el * s.J_in) < 1e-12);
    CHECK(std::abs(r.J_el - s.J_el) < 1e-12);
    CHECK(std::abs(r.J_in - s.J_in) < 1e-12);
    CHECK((s.eps - s.eps_el - s.eps_in).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((s.kappa - s.kappa_el - s.kappa_in).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("virgin branch is stress free and relaxes toward the current metric") {
  const Mat2 I = Mat2::Identity(), Z = Mat2::Zero();
  MaxwellBranch b;
  b.membrane = BranchMembrane::NeoHookeanSplit, b.K1 = 1.0, b.mu1 = 1.0, b.eta_s = 1.0;
  b.bending = true, b.c1 = 1.0, b.eta_b = 1.0;
  MaxwellHistory h = MaxwellHistory::initial(I, Z);
  const auto r0 = maxwell_response(b, h, PointGeometry::make(I, Z, I, Z), 0.1);
  CHECK(r0.tau.norm() < 1e-15);
  CHECK(r0.M0.norm() < 1e-15);

  Mat2 a;
  a << 1.5, 0.1, 0.1, 0.8;
  Mat2 kb;
  kb << 0.2, 0.0, 0.0, -0.1;
  const auto g = PointGeometry::make(a, kb, I, Z);
  double dissipated = 0.0, prev_norm = 1e300;
  for (int step = 0; step < 400; ++step) {
    const auto r = maxwell_response(b, h, g, 0.1, {false, false, false});
    const double d = dissipation_increment(b, h, r.updated, g);
    CHECK(d >= -1e-14);
    dissipated += d;
    CHECK(r.tau.norm() <= prev_norm * (1 + 1e-12) + 1e-14);
    prev_norm = r.tau.norm();
    h = r.updated;
  }
  CHECK(prev_norm < 1e-8);
  CHECK(dissipated > 0.0);
  CHECK((from_voigt(h.ahat) - a.inverse()).norm() < 1e-8);
  CHECK((from_voigt(h.bhat) - kb).norm() < 1e-8);
}

TEST_CASE("intermediate curvature follows the exponential relaxation") {
  MaxwellBranch b;
  b.bending = true, b.c1 = 2.0, b.eta_b = 0.5;
  Mat2 kb;
  kb << 0.3, 0.0, 0.0, 0.1;
  const double t_end = 0.4;
  double prev_err = 0.0;
  for (int n : {200, 400, 800}) {
    const double dt = t_end / n;
    Vec3 bh = Vec3::Zero();
    for (int s = 0; s < n; ++s) bh = update_intermediate_curvature(b, bh, kb, dt);
    const Vec3 exact = to_voigt(kb) * (1.0 - std::exp(-b.c1 * t_end / b.eta_b));
    const double err = (bh - exact).norm();
    if (prev_err > 0.0) CHECK(prev_err / err == doctest::Approx(2.0).epsilon(0.02));
    prev_err = err;
  }
}

TEST_CASE("parameter validation") {
  MaxwellBranch b;
  b.membrane = BranchMembrane::NeoHookean, b.mu1 = 1.0, b.eta_s = 0.0;
  const Mat2 I = Mat2::Identity();
  try {
    update_intermediate_metric(b, to_voigt(I), I, 0.1);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateViscosity);
  }
  b.eta_s = 1.0;
  CHECK_THROWS_AS(update_intermediate_metric(b, to_voigt(I), I, 0.0), Error);
  MaxwellBranch bend;
  bend.bending = true, bend.c1 = 1.0;
  CHECK_THROWS_AS(update_intermediate_curvature(bend, Vec3::Zero(), I, 0.1), Error);
  Mat2 bad;
  bad << 1, 2, 2, 1;
  CHECK_THROWS_AS(spring(b, I, bad), Error);
  for (const auto& br : all_branches()) CHECK(branch_membrane_from_string(to_string(br.membrane)) == br.membrane);
  CHECK_THROWS_AS(branch_membrane_from_string("Foam"), Error);
}

TEST_CASE("material aggregates elastic and branch responses") {
  std::mt19937 rng(38);
  MaterialSpec spec;
  ElasticModel mem;
  mem.kind = ModelKind::NeoHookeanSplitMembrane, mem.K = 2.0, mem.mu = 1.0;
  ElasticModel bend;
  bend.kind = ModelKind::KoiterBending, bend.c = 0.5;
  spec.elastic = {mem, bend};
  spec.branches = all_branches();
  CHECK(spec.has_bending());
  const Mat2 A = oracle::random_spd(rng), B = oracle::random_sym(rng);
  const Mat2 a = A + oracle::random_sym(rng, 0.2), bc = B + oracle::random_sym(rng, 0.2);
  const auto g = PointGeometry::make(a, bc, A, B);
  const auto committed = initial_histories(spec, A.inverse(), B);
  const auto p = evaluate_material(spec, g, committed, 0.2);
  Mat2 tau = elastic_response(mem, g).tau + elastic_response(bend, g).tau;
  for (std::size_t i = 0; i < spec.branches.size(); ++i) {
    const auto r = maxwell_response(spec.branches[i], committed[i], g, 0.2);
    tau += r.tau;
    CHECK((p.tau_branch[i] - r.tau).norm() < 1e-14);
  }
  CHECK((p.total.tau - tau).norm() < 1e-12);
  CHECK(p.updated.size() == spec.branches.size());
  CHECK(p.dissipation_increment >= 0.0);
}
