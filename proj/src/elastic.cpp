// SPDX-License-Identifier: MIT
#include "kls/elastic.hpp"

#include <cmath>

namespace kls {

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::KoiterMembrane: return "KoiterMembrane";
    case ModelKind::NeoHookeanMembrane: return "NeoHookeanMembrane";
    case ModelKind::NeoHookeanSplitMembrane: return "NeoHookeanSplitMembrane";
    case ModelKind::IncompressibleNeoHookeanMembrane: return "IncompressibleNeoHookeanMembrane";
    case ModelKind::ConstantSurfaceTension: return "ConstantSurfaceTension";
    case ModelKind::KoiterBending: return "KoiterBending";
    case ModelKind::HelfrichBending: return "HelfrichBending";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  for (auto k : {ModelKind::KoiterMembrane, ModelKind::NeoHookeanMembrane, ModelKind::NeoHookeanSplitMembrane,
                 ModelKind::IncompressibleNeoHookeanMembrane, ModelKind::ConstantSurfaceTension,
                 ModelKind::KoiterBending, ModelKind::HelfrichBending})
    if (name == to_string(k)) return k;
  throw Error(ErrorKind::SchemaError, "unknown material kind '" + name + "'");
}

bool is_membrane(ModelKind kind) { return kind != ModelKind::KoiterBending && kind != ModelKind::HelfrichBending; }

PointGeometry PointGeometry::make(const Mat2& a_co, const Mat2& b_co, const Mat2& A_co, const Mat2& B_co) {
  PointGeometry g;
  g.a_co = a_co;
  g.b_co = b_co;
  g.A_co = A_co;
  g.B_co = B_co;
  const double det_a = a_co.determinant(), det_A = A_co.determinant();
  if (!(det_a > 0.0) || !(det_A > 0.0)) throw Error(ErrorKind::DegenerateMetric, "metric is not positive definite");
  g.a_con = inverse2<double>(a_co, det_a);
  g.A_con = inverse2<double>(A_co, det_A);
  g.J = std::sqrt(det_a / det_A);
  return g;
}

Response elastic_response(const ElasticModel& m, const PointGeometry& g, bool with_tangents) {
  if (!(g.J > 0.0) || !std::isfinite(g.J)) throw Error(ErrorKind::InvertedElement, "surface stretch J <= 0");
  Response r;
  const Mat2& a = g.a_con;
  const Mat2& A = g.A_con;
  const double J = g.J;
  const double I1 = A.cwiseProduct(g.a_co).sum();
  TangentBlocks& t = r.tangents;
  switch (m.kind) {
    case ModelKind::KoiterMembrane: {
      r.tau = 0.5 * m.K * (I1 - 2.0) * A + m.mu * (A * g.a_co * A - A);
      if (with_tangents) t.c = m.K * outer(A, A) + m.mu * sym_product(A, A);
      break;
    }
    case ModelKind::NeoHookeanMembrane: {
      const double s = 0.5 * m.K * (J * J - 1.0);
      r.tau = s * a + m.mu * (A - a);
      if (with_tangents) t.c = m.K * J * J * outer(a, a) - (s - m.mu) * sym_product(a, a);
      break;
    }
    case ModelKind::NeoHookeanSplitMembrane: {
      const double s = 0.5 * m.K * (J * J - 1.0);
      const double q = m.mu / (2.0 * J);
      const Mat2 dev = 2.0 * A - I1 * a;
      r.tau = s * a + q * dev;
      if (with_tangents)
        t.c = m.K * J * J * outer(a, a) - s * sym_product(a, a) +
              q * (-outer(dev, a) - 2.0 * outer(a, A) + I1 * sym_product(a, a));
      break;
    }
    case ModelKind::IncompressibleNeoHookeanMembrane: {
      r.tau = m.mu * (A - a / (J * J));
      if (with_tangents) t.c = m.mu / (J * J) * (sym_product(a, a) + 2.0 * outer(a, a));
      break;
    }
    case ModelKind::ConstantSurfaceTension: {
      r.tau = m.gamma * J * a;
      if (with_tangents) t.c = m.gamma * J * (outer(a, a) - sym_product(a, a));
      break;
    }
    case ModelKind::KoiterBending: {
      const Tensor4 f = 0.5 * m.c * sym_product(A, A);
      r.M0 = contract(f, g.b_co - g.B_co);
      if (with_tangents) t.f = f;
      break;
    }
    case ModelKind::HelfrichBending: {
      const double h = g.H() - m.H0;
      const Mat2 bc = g.b_con();
      r.tau = J * m.k * (h * h * a - 2.0 * h * bc);
      r.M0 = J * m.k * h * a;
      if (with_tangents) {
        const Tensor4 aa = outer(a, a), ss = sym_product(a, a);
        Tensor4 x;  // a^{αγ}b^{δβ} + a^{αδ}b^{γβ} + b^{αγ}a^{βδ} + b^{αδ}a^{βγ}
        x = sym_product(a, bc) + sym_product(bc, a);
        t.c = J * m.k * (h * h * aa - 2.0 * h * outer(bc, a) - 2.0 * h * outer(a, bc) - h * h * ss +
                         2.0 * outer(bc, bc) + 2.0 * h * x);
        t.d = J * m.k * (h * aa - outer(bc, a) - h * ss);
        t.e = J * m.k * (h * aa - outer(a, bc) - h * ss);
        t.f = 0.5 * J * m.k * aa;
      }
      break;
    }
  }
  return r;
}

Mat2 membrane_stress(const ElasticModel& model, const PointGeometry& g) {
  return elastic_response(model, g, false).tau / g.J;
}

Mat2 bending_moment(const ElasticModel& model, const PointGeometry& g) {
  return elastic_response(model, g, false).M0 / g.J;
}

TangentBlocks elastic_tangents(const ElasticModel& model, const PointGeometry& g) {
  return elastic_response(model, g, true).tangents;
}

double energy_density(const ElasticModel& m, const PointGeometry& g) {
  const double J = g.J;
  const double I1 = g.A_con.cwiseProduct(g.a_co).sum();
  switch (m.kind) {
    case ModelKind::KoiterMembrane: {
      const Mat2 e = g.a_co - g.A_co;
      const Tensor4 c = m.K * outer(g.A_con, g.A_con) + m.mu * sym_product(g.A_con, g.A_con);
      return 0.125 * flatten(e).dot(c * flatten(e));
    }
    case ModelKind::NeoHookeanMembrane:
      return 0.25 * m.K * (J * J - 1.0 - 2.0 * std::log(J)) + 0.5 * m.mu * (I1 - 2.0 - 2.0 * std::log(J));
    case ModelKind::NeoHookeanSplitMembrane:
      return 0.25 * m.K * (J * J - 1.0 - 2.0 * std::log(J)) + 0.5 * m.mu * (I1 / J - 2.0);
    case ModelKind::IncompressibleNeoHookeanMembrane: return 0.5 * m.mu * (I1 + 1.0 / (J * J) - 3.0);
    case ModelKind::ConstantSurfaceTension: return m.gamma * J;
    case ModelKind::KoiterBending: {
      const Mat2 k = g.b_co - g.B_co;
      return 0.25 * m.c * flatten(k).dot(sym_product(g.A_con, g.A_con) * flatten(k));
    }
    case ModelKind::HelfrichBending: {
      const double h = g.H() - m.H0;
      return J * m.k * h * h;
    }
  }
  return 0.0;
}

}  // namespace kls
