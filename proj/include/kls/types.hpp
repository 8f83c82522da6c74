// SPDX-License-Identifier: MIT
// Basic dense types, fourth-order 2D tensor helpers and the library error type.
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace kls {

template <typename Scalar> using Vec2T = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar> using Vec3T = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Mat2T = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar> using Mat3T = Eigen::Matrix<Scalar, 3, 3>;

using Vec2 = Vec2T<double>;
using Vec3 = Vec3T<double>;
using Mat2 = Mat2T<double>;
using Mat3 = Mat3T<double>;

// Components T^{αβγδ} of a fourth-order surface tensor, stored as a 4x4 matrix
// with row index 2α+β and column index 2γ+δ, i.e. the ordering [11, 12, 21, 22].
// The matrix product of two such arrays is the double contraction over the
// shared index pair.
using Tensor4 = Eigen::Matrix<double, 4, 4>;
using Vec4 = Eigen::Matrix<double, 4, 1>;

constexpr int pair(int a, int b) { return 2 * a + b; }

// Symmetric 2x2 tensors in the 3-component storage [11, 12, 22].
inline Vec3 to_voigt(const Mat2& m) { return {m(0, 0), m(0, 1), m(1, 1)}; }
inline Mat2 from_voigt(const Vec3& v) {
  Mat2 m;
  m << v(0), v(1), v(1), v(2);
  return m;
}

inline Vec4 flatten(const Mat2& m) { return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)}; }
inline Mat2 unflatten(const Vec4& v) {
  Mat2 m;
  m << v(0), v(1), v(2), v(3);
  return m;
}

// A ⊗ B with components A^{αβ} B^{γδ}.
inline Tensor4 outer(const Mat2& a, const Mat2& b) { return flatten(a) * flatten(b).transpose(); }

// A^{αγ} B^{βδ} + A^{αδ} B^{βγ}, the symmetrized product of two second-order tensors.
inline Tensor4 sym_product(const Mat2& a, const Mat2& b) {
  Tensor4 t;
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be)
      for (int ga = 0; ga < 2; ++ga)
        for (int de = 0; de < 2; ++de)
          t(pair(al, be), pair(ga, de)) = a(al, ga) * b(be, de) + a(al, de) * b(be, ga);
  return t;
}

// Identity on symmetric tensors, ½(δ^α_γ δ^β_δ + δ^α_δ δ^β_γ).
inline Tensor4 sym_identity() { return 0.5 * sym_product(Mat2::Identity(), Mat2::Identity()); }

// Symmetrizes the second index pair: ½(T^{αβγδ} + T^{αβδγ}).
inline Tensor4 symmetrize_right(const Tensor4& t) {
  Tensor4 s = t;
  s.col(1) = s.col(2) = 0.5 * (t.col(1) + t.col(2));
  return s;
}

// Derivative of X^{αμ} Y_{μν} X^{νβ} with respect to X^{γδ}, symmetrized in γδ.
inline Tensor4 d_sandwich(const Mat2& x, const Mat2& y) {
  const Mat2 yx = y * x, xy = x * y;
  Tensor4 t;
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be)
      for (int ga = 0; ga < 2; ++ga)
        for (int de = 0; de < 2; ++de)
          t(pair(al, be), pair(ga, de)) = (al == ga ? yx(de, be) : 0.0) + (be == de ? xy(al, ga) : 0.0);
  return symmetrize_right(t);
}

// Reduces a tensor acting on symmetric arguments to the 3x3 operator on
// [11, 12, 22] storage; the 12 column sums the 12 and 21 contributions.
inline Mat3 reduce_to_voigt(const Tensor4& t) {
  static constexpr int rows[3] = {0, 1, 3};
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    r(i, 0) = t(rows[i], 0);
    r(i, 1) = t(rows[i], 1) + t(rows[i], 2);
    r(i, 2) = t(rows[i], 3);
  }
  return r;
}

// Expands a 3x3 sensitivity of [11, 12, 22] storage with respect to symmetric
// perturbations [11, 12&21, 22] back to minor-symmetric fourth-order components.
inline Tensor4 expand_from_voigt(const Mat3& r) {
  static constexpr int rows[4] = {0, 1, 1, 2};
  Tensor4 t;
  for (int i = 0; i < 4; ++i) {
    t(i, 0) = r(rows[i], 0);
    t(i, 1) = t(i, 2) = 0.5 * r(rows[i], 1);
    t(i, 3) = r(rows[i], 2);
  }
  return t;
}

// Applies T^{αβγδ} X_{γδ}.
inline Mat2 contract(const Tensor4& t, const Mat2& x) { return unflatten(t * flatten(x)); }

// Inverse of a 2x2 matrix by the adjugate formula.
template <typename Scalar> Mat2T<Scalar> inverse2(const Mat2T<Scalar>& m, const Scalar& det) {
  Mat2T<Scalar> r;
  r << m(1, 1) / det, -m(0, 1) / det, -m(1, 0) / det, m(0, 0) / det;
  return r;
}

enum class ErrorKind {
  InvalidDegree,
  UnsupportedKnotVector,
  InvalidWeight,
  DegenerateParametrization,
  DegenerateMetric,
  DegenerateIntermediateMetric,
  InvertedElement,
  DegenerateViscosity,
  LocalSingularity,
  LocalNonconvergence,
  TangentSingularity,
  ProjectionError,
  SolverSingular,
  SolverDivergence,
  ParameterError,
  UndefinedError,
  SchemaError,
  UnsupportedStudy,
  IoError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kls
