// SPDX-License-Identifier: MIT
// Bernstein, B-spline and NURBS basis evaluation through Bézier extraction.
#pragma once

#include "kls/types.hpp"

#include <vector>

namespace kls {

struct KnotVector {
  std::vector<double> knots;
  int degree = 1;

  int num_basis() const { return static_cast<int>(knots.size()) - degree - 1; }
};

// Throws UnsupportedKnotVector unless the vector is nondecreasing, open and has
// no interior knot repeated more than p+1 times; throws InvalidDegree for p < 1.
void validate(const KnotVector& kv);

// Uniform open knot vector with the given number of spans on [a, b].
KnotVector uniform_knots(int degree, int spans, double a = 0.0, double b = 1.0);

struct Bernstein1D {
  Eigen::VectorXd values, d1, d2;
};

// The p+1 Bernstein polynomials on [0, 1] and their first two derivatives.
Bernstein1D bernstein(int p, double t);

// Half-open parametric interval of one nonempty knot span.
struct Span {
  double lo = 0.0, hi = 0.0;
  int first_basis = 0;  // global index of the first of the p+1 supported functions
};

std::vector<Span> spans(const KnotVector& kv);

// One (p+1)x(p+1) operator per nonempty span with N^e(ξ) = C^e B(t).
std::vector<Eigen::MatrixXd> build_extraction(const KnotVector& kv);

// B-spline values and derivatives of the p+1 functions supported on a span.
struct SpanBasis {
  Eigen::VectorXd values, d1, d2;
};
SpanBasis bspline_on_span(const Eigen::MatrixXd& extraction, int p, const Span& span, double xi);

// Values, first derivatives (ξ, η) and second derivatives (ξξ, ξη, ηη) of the
// n_e rational basis functions of one element.
struct BasisEval {
  Eigen::VectorXd values;
  Eigen::Matrix<double, Eigen::Dynamic, 2> d1;
  Eigen::Matrix<double, Eigen::Dynamic, 3> d2;
};

// Tensor-product NURBS basis; local ordering is a = j (p+1) + i with i along ξ.
BasisEval nurbs_eval(const SpanBasis& bu, const SpanBasis& bv, const Eigen::VectorXd& weights);

struct GaussRule {
  Eigen::VectorXd points, weights;  // on [0, 1]
};
GaussRule gauss_legendre(int n);

// Knot insertion for a curve with homogeneous control points (x w, y w, z w, w) as rows.
void insert_knot(KnotVector& kv, Eigen::MatrixXd& homogeneous, double knot);

}  // namespace kls
