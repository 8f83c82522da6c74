// SPDX-License-Identifier: MIT
// Hyperelastic membrane and bending models of the elastic branch.
#pragma once

#include "kls/types.hpp"

#include <string>

namespace kls {

enum class ModelKind {
  KoiterMembrane,
  NeoHookeanMembrane,
  NeoHookeanSplitMembrane,
  IncompressibleNeoHookeanMembrane,
  ConstantSurfaceTension,
  KoiterBending,
  HelfrichBending,
};

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);
bool is_membrane(ModelKind kind);

struct ElasticModel {
  ModelKind kind = ModelKind::NeoHookeanMembrane;
  double K = 0.0;      // areal bulk modulus
  double mu = 0.0;     // shear modulus
  double gamma = 0.0;  // surface tension
  double c = 0.0;      // Koiter bending modulus
  double k = 0.0;      // Helfrich bending modulus
  double kstar = 0.0;  // Gaussian modulus, fixed to zero
  double H0 = 0.0;     // spontaneous curvature
};

// Current and reference metric/curvature at a material point.
struct PointGeometry {
  Mat2 a_co, a_con, b_co;
  Mat2 A_co, A_con, B_co;
  double J = 1.0;

  static PointGeometry make(const Mat2& a_co, const Mat2& b_co, const Mat2& A_co, const Mat2& B_co);
  double H() const { return 0.5 * a_con.cwiseProduct(b_co).sum(); }
  Mat2 b_con() const { return a_con * b_co * a_con; }
};

// c = 2 ∂τ/∂a, d = ∂τ/∂b, e = 2 ∂M0/∂a, f = ∂M0/∂b.
struct TangentBlocks {
  Tensor4 c = Tensor4::Zero(), d = Tensor4::Zero(), e = Tensor4::Zero(), f = Tensor4::Zero();

  TangentBlocks& operator+=(const TangentBlocks& o) {
    c += o.c;
    d += o.d;
    e += o.e;
    f += o.f;
    return *this;
  }
};

// Kirchhoff stress τ = Jσ, reference moment M0 = JM and tangents.
struct Response {
  Mat2 tau = Mat2::Zero(), M0 = Mat2::Zero();
  TangentBlocks tangents;
};

Response elastic_response(const ElasticModel& model, const PointGeometry& g, bool with_tangents = true);

// Cauchy stress σ^{αβ} and moment M^{αβ}.
Mat2 membrane_stress(const ElasticModel& model, const PointGeometry& g);
Mat2 bending_moment(const ElasticModel& model, const PointGeometry& g);
TangentBlocks elastic_tangents(const ElasticModel& model, const PointGeometry& g);

// Stored energy per reference area; σ = (2/J) ∂Ψ/∂a and M = (1/J) ∂Ψ/∂b.
double energy_density(const ElasticModel& model, const PointGeometry& g);

}  // namespace kls
