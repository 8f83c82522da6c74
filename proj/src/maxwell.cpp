// SPDX-License-Identifier: MIT
#include "kls/maxwell.hpp"

#include <cmath>
#include <string>

namespace kls {

namespace {

constexpr double kLocalTol = 1e-10;
constexpr int kLocalMaxIter = 25;

bool is_spd(const Mat2& m) { return m(0, 0) > 0.0 && m.determinant() > 0.0; }

void require_membrane_viscosity(const MaxwellBranch& b) {
  if (!(b.eta_s > 0.0))
    throw Error(ErrorKind::DegenerateViscosity, "membrane Maxwell branch requires eta_s > 0; remove the branch instead");
}

void require_positive_step(double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::ParameterError, "time step must be positive");
}

}  // namespace

const char* to_string(BranchMembrane kind) {
  switch (kind) {
    case BranchMembrane::None: return "None";
    case BranchMembrane::Koiter: return "KoiterMembrane";
    case BranchMembrane::NeoHookean: return "NeoHookeanMembrane";
    case BranchMembrane::NeoHookeanSplit: return "NeoHookeanSplitMembrane";
    case BranchMembrane::Incompressible: return "IncompressibleNeoHookeanMembrane";
    case BranchMembrane::SurfaceTension: return "ConstantSurfaceTension";
  }
  return "unknown";
}

BranchMembrane branch_membrane_from_string(const std::string& name) {
  for (auto k : {BranchMembrane::None, BranchMembrane::Koiter, BranchMembrane::NeoHookean,
                 BranchMembrane::NeoHookeanSplit, BranchMembrane::Incompressible, BranchMembrane::SurfaceTension})
    if (name == to_string(k)) return k;
  throw Error(ErrorKind::SchemaError, "unknown Maxwell membrane kind '" + name + "'");
}

SpringEval spring(const MaxwellBranch& b, const Mat2& a_co, const Mat2& ahat) {
  SpringEval s;
  if (!is_spd(ahat)) throw Error(ErrorKind::DegenerateIntermediateMetric, "intermediate metric is not positive definite");
  const double det_a = a_co.determinant();
  const double det_hat = ahat.determinant();
  const Mat2 a = inverse2<double>(a_co, det_a);
  const Mat2 ahat_co = inverse2<double>(ahat, det_hat);
  const double J_el = std::sqrt(det_a * det_hat);
  const double I1el = ahat.cwiseProduct(a_co).sum();
  const Tensor4 Is = sym_identity();
  s.J_el = J_el;
  switch (b.membrane) {
    case BranchMembrane::None: break;
    case BranchMembrane::Koiter: {
      s.sigma_hat = 0.5 * b.K1 * (I1el - 2.0) * ahat + b.mu1 * (ahat * a_co * ahat - ahat);
      s.d_ahat = 0.5 * b.K1 * (outer(ahat, a_co) + (I1el - 2.0) * Is) + b.mu1 * (d_sandwich(ahat, a_co) - Is);
      s.d_a = 0.5 * b.K1 * outer(ahat, ahat) + 0.5 * b.mu1 * sym_product(ahat, ahat);
      break;
    }
    case BranchMembrane::NeoHookean: {
      const double sv = 0.5 * b.K1 * (J_el * J_el - 1.0);
      s.sigma_hat = sv * a + b.mu1 * (ahat - a);
      s.d_ahat = 0.5 * b.K1 * J_el * J_el * outer(a, ahat_co) + b.mu1 * Is;
      s.d_a = 0.5 * b.K1 * J_el * J_el * outer(a, a) - 0.5 * (sv - b.mu1) * sym_product(a, a);
      break;
    }
    case BranchMembrane::NeoHookeanSplit: {
      const double sv = 0.5 * b.K1 * (J_el * J_el - 1.0);
      const double q = b.mu1 / (2.0 * J_el);
      const Mat2 dev = 2.0 * ahat - I1el * a;
      s.sigma_hat = sv * a + q * dev;
      s.d_ahat = 0.5 * b.K1 * J_el * J_el * outer(a, ahat_co) - 0.5 * q * outer(dev, ahat_co) +
                 q * (2.0 * Is - outer(a, a_co));
      s.d_a = 0.5 * b.K1 * J_el * J_el * outer(a, a) - 0.5 * sv * sym_product(a, a) - 0.5 * q * outer(dev, a) +
              q * (-outer(a, ahat) + 0.5 * I1el * sym_product(a, a));
      break;
    }
    case BranchMembrane::Incompressible: {
      const double j2 = J_el * J_el;
      s.sigma_hat = b.mu1 * (ahat - a / j2);
      s.d_ahat = b.mu1 * (Is + outer(a, ahat_co) / j2);
      s.d_a = b.mu1 / j2 * (0.5 * sym_product(a, a) + outer(a, a));
      break;
    }
    case BranchMembrane::SurfaceTension: {
      s.sigma_hat = b.gamma1 * ahat;
      s.d_ahat = b.gamma1 * Is;
      break;
    }
  }
  return s;
}

Vec3 residual_surface(const MaxwellBranch& b, const Vec3& ahat_new, const Vec3& ahat_n, const Mat2& a_co, double dt) {
  require_positive_step(dt);
  require_membrane_viscosity(b);
  const SpringEval s = spring(b, a_co, from_voigt(ahat_new));
  return (ahat_new - ahat_n) / dt + to_voigt(s.sigma_hat) / b.eta_s;
}

Mat3 jacobian_surface(const MaxwellBranch& b, const Vec3& ahat_new, const Mat2& a_co, double dt) {
  require_positive_step(dt);
  require_membrane_viscosity(b);
  const SpringEval s = spring(b, a_co, from_voigt(ahat_new));
  return Mat3::Identity() / dt + reduce_to_voigt(s.d_ahat) / b.eta_s;
}

Vec3 update_intermediate_metric(const MaxwellBranch& b, const Vec3& ahat_n, const Mat2& a_co, double dt,
                                LocalReport* report, bool force_newton) {
  LocalReport local;
  Vec3 result = ahat_n;
  if (b.membrane == BranchMembrane::None) {
    local.closed_form = true;
  } else {
    require_positive_step(dt);
    require_membrane_viscosity(b);
    if (!force_newton && b.membrane == BranchMembrane::NeoHookean && b.K1 == 0.0) {
      const Vec3 a = to_voigt(inverse2<double>(a_co, a_co.determinant()));
      result = (b.eta_s * ahat_n + b.mu1 * dt * a) / (b.eta_s + b.mu1 * dt);
      local.closed_form = true;
    } else if (!force_newton && b.membrane == BranchMembrane::SurfaceTension) {
      result = b.eta_s / (b.eta_s + b.gamma1 * dt) * ahat_n;
      local.closed_form = true;
    } else {
      bool converged = false;
      for (int it = 1; it <= kLocalMaxIter; ++it) {
        const Vec3 g = residual_surface(b, result, ahat_n, a_co, dt);
        const Mat3 jac = jacobian_surface(b, result, a_co, dt);
        Eigen::FullPivLU<Mat3> lu(jac);
        if (!lu.isInvertible())
          throw Error(ErrorKind::LocalSingularity, "singular Jacobian in the intermediate-metric update");
        Vec3 step = -lu.solve(g);
        double scale = 1.0;
        while (!is_spd(from_voigt(result + scale * step)) && scale > 1e-8) scale *= 0.5;
        result += scale * step;
        local.iterations = it;
        local.step_norm = (scale * step).norm();
        if (local.step_norm <= kLocalTol) {
          converged = true;
          break;
        }
      }
      if (!converged)
        throw Error(ErrorKind::LocalNonconvergence,
                    "intermediate-metric update did not converge; last residual norm " +
                        std::to_string(residual_surface(b, result, ahat_n, a_co, dt).norm()));
    }
  }
  if (report) *report = local;
  return result;
}

Vec3 update_intermediate_curvature(const MaxwellBranch& b, const Vec3& bhat_n, const Mat2& b_co, double dt) {
  if (!b.bending) return bhat_n;
  require_positive_step(dt);
  if (!(b.eta_b > 0.0))
    throw Error(ErrorKind::DegenerateViscosity, "bending Maxwell branch requires eta_b > 0; remove the branch instead");
  return (b.eta_b * bhat_n + b.c1 * dt * to_voigt(b_co)) / (b.eta_b + b.c1 * dt);
}

BranchStress maxwell_stress_and_moment(const MaxwellBranch& b, const Vec3& ahat_v, const Vec3& bhat_v,
                                       const PointGeometry& g) {
  BranchStress out;
  const Mat2 ahat = from_voigt(ahat_v);
  const SpringEval s = spring(b, g.a_co, ahat);
  out.sigma = s.sigma_hat / s.J_el;
  if (b.bending) out.moment = b.c1 * ahat * (g.b_co - from_voigt(bhat_v)) * ahat / s.J_el;
  return out;
}

BranchResponse maxwell_response(const MaxwellBranch& b, const MaxwellHistory& committed, const PointGeometry& g,
                                double dt, const BranchOptions& opt) {
  BranchResponse r;
  r.updated = committed;
  r.updated.ahat = update_intermediate_metric(b, committed.ahat, g.a_co, dt, &r.report, opt.force_newton);
  r.updated.bhat = update_intermediate_curvature(b, committed.bhat, g.b_co, dt);

  const Mat2 ahat = from_voigt(r.updated.ahat);
  const SpringEval s = spring(b, g.a_co, ahat);
  const Mat2 ahat_co = inverse2<double>(ahat, ahat.determinant());
  r.J_el = s.J_el;
  r.J_in = g.J / s.J_el;
  r.tau = r.J_in * s.sigma_hat;
  const Mat2 kappa_el = g.b_co - from_voigt(r.updated.bhat);
  const Mat2 m_hat = b.bending ? Mat2(b.c1 * ahat * kappa_el * ahat) : Mat2::Zero();
  r.M0 = r.J_in * m_hat;
  if (!opt.with_tangents) return r;

  // Sensitivity ∂â/∂a of the converged local problem.
  Tensor4 sens = Tensor4::Zero();
  if (b.membrane != BranchMembrane::None && !opt.drop_sensitivity) {
    const Mat3 jac = Mat3::Identity() / dt + reduce_to_voigt(s.d_ahat) / b.eta_s;
    const Mat3 rhs = -reduce_to_voigt(s.d_a) / b.eta_s;
    Eigen::FullPivLU<Mat3> lu(jac);
    if (!lu.isInvertible()) throw Error(ErrorKind::TangentSingularity, "singular sensitivity system");
    sens = expand_from_voigt(lu.solve(rhs));
  }
  const Eigen::Matrix<double, 1, 4> dJin = -0.5 * r.J_in * flatten(ahat_co).transpose() * sens;
  r.tangents.c = 2.0 * (flatten(s.sigma_hat) * dJin + r.J_in * (s.d_a + s.d_ahat * sens));
  if (b.bending) {
    const double relax = opt.drop_sensitivity ? 1.0 : b.eta_b / (b.eta_b + b.c1 * dt);
    r.tangents.f = r.J_in * 0.5 * b.c1 * sym_product(ahat, ahat) * relax;
    r.tangents.e = 2.0 * (flatten(m_hat) * dJin + r.J_in * b.c1 * d_sandwich(ahat, kappa_el) * sens);
  }
  return r;
}

TangentBlocks maxwell_tangents(const MaxwellBranch& b, const MaxwellHistory& committed, const PointGeometry& g,
                               double dt) {
  return maxwell_response(b, committed, g, dt).tangents;
}

double dissipation_increment(const MaxwellBranch& b, const MaxwellHistory& previous, const MaxwellHistory& updated,
                             const PointGeometry& g) {
  const Mat2 ahat = from_voigt(updated.ahat), ahat_prev = from_voigt(previous.ahat);
  const SpringEval s = spring(b, g.a_co, ahat);
  const double J_in = g.J / s.J_el;
  double d = 0.0;
  if (b.membrane != BranchMembrane::None) {
    const Mat2 dco = inverse2<double>(ahat, ahat.determinant()) - inverse2<double>(ahat_prev, ahat_prev.determinant());
    d += (J_in * s.sigma_hat).cwiseProduct(0.5 * dco).sum();
  }
  if (b.bending) {
    const Mat2 m0 = J_in * b.c1 * ahat * (g.b_co - from_voigt(updated.bhat)) * ahat;
    d += m0.cwiseProduct(from_voigt(updated.bhat) - from_voigt(previous.bhat)).sum();
  }
  return d;
}

}  // namespace kls
