// SPDX-License-Identifier: MIT
#include "kls/spline.hpp"

#include <cmath>
#include <string>

namespace kls {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDegree: return "invalid-degree";
    case ErrorKind::UnsupportedKnotVector: return "unsupported-knot-vector";
    case ErrorKind::InvalidWeight: return "invalid-weight";
    case ErrorKind::DegenerateParametrization: return "degenerate-parametrization";
    case ErrorKind::DegenerateMetric: return "degenerate-metric";
    case ErrorKind::DegenerateIntermediateMetric: return "degenerate-intermediate-metric";
    case ErrorKind::InvertedElement: return "element-inversion";
    case ErrorKind::DegenerateViscosity: return "degenerate-viscosity";
    case ErrorKind::LocalSingularity: return "local-singularity";
    case ErrorKind::LocalNonconvergence: return "local-nonconvergence";
    case ErrorKind::TangentSingularity: return "tangent-singularity";
    case ErrorKind::ProjectionError: return "projection-error";
    case ErrorKind::SolverSingular: return "singular-tangent";
    case ErrorKind::SolverDivergence: return "divergence";
    case ErrorKind::ParameterError: return "parameter-error";
    case ErrorKind::UndefinedError: return "undefined-error";
    case ErrorKind::SchemaError: return "schema-error";
    case ErrorKind::UnsupportedStudy: return "unsupported-study";
    case ErrorKind::IoError: return "io-error";
  }
  return "unknown";
}

void validate(const KnotVector& kv) {
  const int p = kv.degree;
  if (p < 1) throw Error(ErrorKind::InvalidDegree, "degree must be at least 1, got " + std::to_string(p));
  const auto& u = kv.knots;
  const int m = static_cast<int>(u.size());
  if (m < 2 * (p + 1))
    throw Error(ErrorKind::UnsupportedKnotVector, "knot vector too short for degree " + std::to_string(p));
  for (int i = 1; i < m; ++i)
    if (u[i] < u[i - 1]) throw Error(ErrorKind::UnsupportedKnotVector, "knot vector must be nondecreasing");
  for (int i = 1; i <= p; ++i)
    if (u[i] != u[0] || u[m - 1 - i] != u[m - 1])
      throw Error(ErrorKind::UnsupportedKnotVector, "knot vector must be open (end knots repeated p+1 times)");
  if (!(u[m - 1] > u[0])) throw Error(ErrorKind::UnsupportedKnotVector, "knot vector has no nonempty span");
  int run = 1;
  for (int i = 1; i < m; ++i) {
    run = (u[i] == u[i - 1]) ? run + 1 : 1;
    if (run > p + 1)
      throw Error(ErrorKind::UnsupportedKnotVector, "knot multiplicity exceeds p+1 at value " + std::to_string(u[i]));
  }
}

KnotVector uniform_knots(int degree, int spans, double a, double b) {
  KnotVector kv;
  kv.degree = degree;
  for (int i = 0; i < degree; ++i) kv.knots.push_back(a);
  for (int i = 0; i <= spans; ++i) kv.knots.push_back(a + (b - a) * i / spans);
  for (int i = 0; i < degree; ++i) kv.knots.push_back(b);
  return kv;
}

Bernstein1D bernstein(int p, double t) {
  if (p < 1) throw Error(ErrorKind::InvalidDegree, "degree must be at least 1, got " + std::to_string(p));
  // Values of degree p-2, p-1 and p by the triangular recursion.
  auto level = [t](int q) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(q + 1);
    if (q < 0) return b;
    b(0) = 1.0;
    for (int k = 1; k <= q; ++k) {
      for (int i = k; i >= 1; --i) b(i) = (1.0 - t) * b(i) + t * b(i - 1);
      b(0) *= (1.0 - t);
    }
    return b;
  };
  Bernstein1D out;
  out.values = level(p);
  const Eigen::VectorXd lower = level(p - 1);
  out.d1 = Eigen::VectorXd::Zero(p + 1);
  for (int i = 0; i <= p; ++i) {
    const double left = (i >= 1) ? lower(i - 1) : 0.0;
    const double right = (i <= p - 1) ? lower(i) : 0.0;
    out.d1(i) = p * (left - right);
  }
  out.d2 = Eigen::VectorXd::Zero(p + 1);
  if (p >= 2) {
    const Eigen::VectorXd lower2 = level(p - 2);
    auto at = [&](int i) { return (i >= 0 && i <= p - 2) ? lower2(i) : 0.0; };
    for (int i = 0; i <= p; ++i) out.d2(i) = p * (p - 1) * (at(i - 2) - 2.0 * at(i - 1) + at(i));
  }
  return out;
}

std::vector<Span> spans(const KnotVector& kv) {
  validate(kv);
  std::vector<Span> out;
  const int p = kv.degree;
  const auto& u = kv.knots;
  for (int s = p; s < static_cast<int>(u.size()) - p - 1; ++s)
    if (u[s + 1] > u[s]) out.push_back({u[s], u[s + 1], s - p});
  return out;
}

std::vector<Eigen::MatrixXd> build_extraction(const KnotVector& kv) {
  validate(kv);
  const int p = kv.degree;
  const auto& knots = kv.knots;
  const int m = static_cast<int>(knots.size());
  auto U = [&](int i) { return knots[i - 1]; };  // 1-based access

  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(p + 1, p + 1);
  std::vector<Eigen::MatrixXd> ops{eye};
  Eigen::VectorXd alphas(p + 1);
  int a = p + 1, b = a + 1, nb = 0;
  while (b < m) {
    ops.push_back(eye);
    const int i = b;
    while (b < m && U(b + 1) == U(b)) ++b;
    const int mult = b - i + 1;
    if (mult < p) {
      const double numer = U(b) - U(a);
      for (int j = p; j > mult; --j) alphas(j - mult) = numer / (U(a + j) - U(a));
      const int r = p - mult;
      for (int j = 1; j <= r; ++j) {
        const int save = r - j + 1;
        const int s = mult + j;
        for (int k = p + 1; k >= s + 1; --k) {
          const double alpha = alphas(k - s);
          ops[nb].col(k - 1) = alpha * ops[nb].col(k - 1) + (1.0 - alpha) * ops[nb].col(k - 2);
        }
        if (b < m)
          for (int t = 0; t <= j; ++t) ops[nb + 1](save - 1 + t, save - 1) = ops[nb](p - j + t, p);
      }
    }
    ++nb;
    if (b < m) {
      a = b;
      ++b;
    }
  }
  ops.resize(nb);
  return ops;
}

SpanBasis bspline_on_span(const Eigen::MatrixXd& extraction, int p, const Span& span, double xi) {
  const double h = span.hi - span.lo;
  const Bernstein1D bb = bernstein(p, (xi - span.lo) / h);
  return {extraction * bb.values, extraction * bb.d1 / h, extraction * bb.d2 / (h * h)};
}

BasisEval nurbs_eval(const SpanBasis& bu, const SpanBasis& bv, const Eigen::VectorXd& weights) {
  const int nu = static_cast<int>(bu.values.size());
  const int nv = static_cast<int>(bv.values.size());
  const int n = nu * nv;
  for (int a = 0; a < n; ++a)
    if (!(weights(a) > 0.0)) throw Error(ErrorKind::InvalidWeight, "control weights must be positive");
  Eigen::VectorXd wn(n);
  Eigen::Matrix<double, Eigen::Dynamic, 2> wd1(n, 2);
  Eigen::Matrix<double, Eigen::Dynamic, 3> wd2(n, 3);
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nu; ++i) {
      const int a = j * nu + i;
      const double w = weights(a);
      wn(a) = w * bu.values(i) * bv.values(j);
      wd1(a, 0) = w * bu.d1(i) * bv.values(j);
      wd1(a, 1) = w * bu.values(i) * bv.d1(j);
      wd2(a, 0) = w * bu.d2(i) * bv.values(j);
      wd2(a, 1) = w * bu.d1(i) * bv.d1(j);
      wd2(a, 2) = w * bu.values(i) * bv.d2(j);
    }
  const double W = wn.sum();
  const Eigen::RowVector2d W1 = wd1.colwise().sum();
  const Eigen::RowVector3d W2 = wd2.colwise().sum();

  BasisEval out;
  out.values = wn / W;
  out.d1.resize(n, 2);
  out.d2.resize(n, 3);
  for (int al = 0; al < 2; ++al) out.d1.col(al) = (wd1.col(al) - out.values * W1(al)) / W;
  static constexpr int first[3] = {0, 0, 1}, second[3] = {0, 1, 1};
  for (int k = 0; k < 3; ++k) {
    const int al = first[k], be = second[k];
    out.d2.col(k) = (wd2.col(k) - out.d1.col(al) * W1(be) - out.d1.col(be) * W1(al) - out.values * W2(k)) / W;
  }
  return out;
}

GaussRule gauss_legendre(int n) {
  // Golub–Welsch: eigen-decomposition of the Jacobi matrix of Legendre polynomials.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double beta = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = jacobi(i - 1, i) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  GaussRule rule;
  rule.points = (eig.eigenvalues().array() + 1.0) / 2.0;
  rule.weights = eig.eigenvectors().row(0).transpose().array().square();  // sums to 1 on [0, 1]
  return rule;
}

void insert_knot(KnotVector& kv, Eigen::MatrixXd& homogeneous, double knot) {
  const int p = kv.degree;
  const auto& u = kv.knots;
  int k = p;
  while (k + 1 < static_cast<int>(u.size()) - p - 1 && u[k + 1] <= knot) ++k;
  const int n = static_cast<int>(homogeneous.rows());
  Eigen::MatrixXd q(n + 1, homogeneous.cols());
  for (int i = 0; i <= n; ++i) {
    if (i <= k - p) {
      q.row(i) = homogeneous.row(i);
    } else if (i > k) {
      q.row(i) = homogeneous.row(i - 1);
    } else {
      const double alpha = (knot - u[i]) / (u[i + p] - u[i]);
      q.row(i) = alpha * homogeneous.row(i) + (1.0 - alpha) * homogeneous.row(i - 1);
    }
  }
  kv.knots.insert(kv.knots.begin() + k + 1, knot);
  homogeneous = q;
}

}  // namespace kls
