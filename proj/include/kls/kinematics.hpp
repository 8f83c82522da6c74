// SPDX-License-Identifier: MIT
// Curvilinear surface quantities at a point: tangents, normal, metrics,
// curvature, Christoffel symbols, invariants and the multiplicative split.
#pragma once

#include "kls/spline.hpp"
#include "kls/types.hpp"

#include <array>
#include <cmath>

namespace kls {

constexpr double kGeometryEps = 1e-12;

// Position, tangents a_α and their derivatives a_{α,β} at a point.
template <typename Scalar> struct SurfacePoint {
  Vec3T<Scalar> x, a1, a2;
  Vec3T<Scalar> a11, a12, a22;  // a_{1,1}, a_{1,2} = a_{2,1}, a_{2,2}
  Vec3T<Scalar> n;
  Scalar area;  // |a1 x a2|

  const Vec3T<Scalar>& tangent(int alpha) const { return alpha == 0 ? a1 : a2; }
  const Vec3T<Scalar>& second(int alpha, int beta) const {
    return alpha + beta == 0 ? a11 : (alpha + beta == 1 ? a12 : a22);
  }
};

template <typename Scalar> struct SurfacePointState {
  Vec3T<Scalar> a1, a2, n;
  Vec3T<Scalar> a1_con, a2_con;  // contravariant basis a^α
  Mat2T<Scalar> a_co, a_con, b_co;
  std::array<Mat2T<Scalar>, 2> christoffel;  // christoffel[γ](α, β) = Γ^γ_{αβ}
  Scalar sqrt_det;                           // √det a_{αβ}
  Scalar H, gauss;

  const Vec3T<Scalar>& tangent(int alpha) const { return alpha == 0 ? a1 : a2; }
  const Vec3T<Scalar>& dual(int alpha) const { return alpha == 0 ? a1_con : a2_con; }
};

// Evaluates x, a_α, a_{α,β} and n from basis derivatives and element control positions.
template <typename Scalar>
SurfacePoint<Scalar> surface_point(const BasisEval& basis,
                                   const Eigen::Matrix<Scalar, Eigen::Dynamic, 3>& controls,
                                   double eps = kGeometryEps) {
  using std::sqrt;
  SurfacePoint<Scalar> sp;
  const auto ct = controls.transpose();
  sp.x = ct * basis.values.template cast<Scalar>();
  sp.a1 = ct * basis.d1.col(0).template cast<Scalar>();
  sp.a2 = ct * basis.d1.col(1).template cast<Scalar>();
  sp.a11 = ct * basis.d2.col(0).template cast<Scalar>();
  sp.a12 = ct * basis.d2.col(1).template cast<Scalar>();
  sp.a22 = ct * basis.d2.col(2).template cast<Scalar>();
  const Vec3T<Scalar> c = sp.a1.cross(sp.a2);
  sp.area = sqrt(c.squaredNorm());
  if (!(sp.area > eps))
    throw Error(ErrorKind::DegenerateParametrization, "tangent vectors are parallel or vanishing (|a1 x a2| <= eps)");
  sp.n = c / sp.area;
  return sp;
}

template <typename Scalar> SurfacePointState<Scalar> metric_and_curvature(const SurfacePoint<Scalar>& sp) {
  using std::sqrt;
  SurfacePointState<Scalar> s;
  s.a1 = sp.a1;
  s.a2 = sp.a2;
  s.n = sp.n;
  s.a_co << sp.a1.dot(sp.a1), sp.a1.dot(sp.a2), sp.a2.dot(sp.a1), sp.a2.dot(sp.a2);
  const Scalar det = s.a_co(0, 0) * s.a_co(1, 1) - s.a_co(0, 1) * s.a_co(1, 0);
  if (!(det > Scalar(kGeometryEps * kGeometryEps)))
    throw Error(ErrorKind::DegenerateMetric, "covariant metric is singular");
  s.a_con = inverse2<Scalar>(s.a_co, det);
  s.sqrt_det = sqrt(det);
  s.a1_con = s.a_con(0, 0) * sp.a1 + s.a_con(0, 1) * sp.a2;
  s.a2_con = s.a_con(1, 0) * sp.a1 + s.a_con(1, 1) * sp.a2;
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be) {
      const Vec3T<Scalar>& d = sp.second(al, be);
      s.b_co(al, be) = d.dot(sp.n);
      s.christoffel[0](al, be) = d.dot(s.a1_con);
      s.christoffel[1](al, be) = d.dot(s.a2_con);
    }
  const Mat2T<Scalar> mixed = s.a_con * s.b_co;  // b^α_β
  s.H = Scalar(0.5) * mixed.trace();
  s.gauss = mixed.determinant();
  return s;
}

struct Invariants {
  double I1 = 2.0, J = 1.0;
};

// I1 = A^{αβ} a_{αβ} and J = √(det a / det A).
inline Invariants invariants(const Mat2& A_con, const Mat2& a_co, const Mat2& A_co) {
  return {(A_con.cwiseProduct(a_co)).sum(), std::sqrt(a_co.determinant() / A_co.determinant())};
}

struct SplitState {
  Mat2 ahat_con, ahat_co, bhat_co;
  double J = 1.0, J_el = 1.0, J_in = 1.0;
  double I1 = 2.0, I1_el = 2.0;
  Mat2 eps, eps_el, eps_in;        // ½(a − A), ½(a − â), ½(â − A)
  Mat2 kappa, kappa_el, kappa_in;  // b − B, b − b̂, b̂ − B
};

SplitState split_quantities(const Mat2& a_co, const Mat2& A_co, const Mat2& ahat_con);
SplitState split_quantities(const Mat2& a_co, const Mat2& A_co, const Mat2& ahat_con, const Mat2& b_co,
                            const Mat2& B_co, const Mat2& bhat_co);

}  // namespace kls
