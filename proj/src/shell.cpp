// SPDX-License-Identifier: MIT
#include "kls/shell.hpp"

#include "kls/kinematics.hpp"

#include <Eigen/Sparse>
#include <unsupported/Eigen/AutoDiff>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace kls {

namespace {

using AD = Eigen::AutoDiffScalar<Eigen::Matrix<double, 6, 1>>;

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0, -v(2), v(1), v(2), 0, -v(0), -v(1), v(0), 0;
  return s;
}

BasisEval element_basis(const Mesh& mesh, const Element& e, double xi, double eta) {
  return nurbs_eval(bspline_on_span(e.cu, mesh.ku.degree, e.su, xi), bspline_on_span(e.cv, mesh.kv.degree, e.sv, eta),
                    mesh.element_weights(e));
}

// Covariant second derivatives N_{;αβ} = N_{,αβ} - Γ^γ_{αβ} N_{,γ} of one basis function.
Mat2 covariant_hessian(const BasisEval& b, int A, const std::array<Mat2, 2>& gamma) {
  Mat2 h;
  h << b.d2(A, 0), b.d2(A, 1), b.d2(A, 1), b.d2(A, 2);
  return h - gamma[0] * b.d1(A, 0) - gamma[1] * b.d1(A, 1);
}

// The vectors √det a a^{βα} n (α = 1, 2) of the boundary moment term and their
// derivatives with respect to the tangents a_1, a_2.
struct EdgeMomentKernel {
  std::array<Vec3, 2> v;
  std::array<std::array<Mat3, 2>, 2> dv;  // dv[α][γ] = ∂v^α/∂a_γ
};

EdgeMomentKernel edge_moment_kernel(const Vec3& a1, const Vec3& a2, int fixed) {
  Vec3T<AD> t1, t2;
  for (int k = 0; k < 3; ++k) {
    t1(k) = AD(a1(k), 6, k);
    t2(k) = AD(a2(k), 6, 3 + k);
  }
  Mat2T<AD> a;
  a << t1.dot(t1), t1.dot(t2), t2.dot(t1), t2.dot(t2);
  const AD det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const Mat2T<AD> acon = inverse2<AD>(a, det);
  const Vec3T<AD> c = t1.cross(t2);
  const AD area = sqrt(c.squaredNorm());
  const Vec3T<AD> n = c / area;
  EdgeMomentKernel k;
  for (int al = 0; al < 2; ++al) {
    const Vec3T<AD> v = area * acon(fixed, al) * n;
    for (int i = 0; i < 3; ++i) {
      k.v[al](i) = v(i).value();
      for (int g = 0; g < 2; ++g)
        for (int j = 0; j < 3; ++j) k.dv[al][g](i, j) = v(i).derivatives()(3 * g + j);
    }
  }
  return k;
}

double split_defect(const Mat2& a, const Mat2& A, const Mat2& b, const Mat2& B, const MaxwellHistory& h) {
  const auto s = split_quantities(a, A, from_voigt(h.ahat), b, B, from_voigt(h.bhat));
  return std::max({std::abs(s.J - s.J_el * s.J_in), (s.eps - s.eps_el - s.eps_in).cwiseAbs().maxCoeff(),
                   (s.kappa - s.kappa_el - s.kappa_in).cwiseAbs().maxCoeff()});
}

}  // namespace

bool Loads::empty() const {
  if (pressure != 0.0 || !tangential.isZero(0.0) || !dead.isZero(0.0)) return false;
  for (const auto& e : edges)
    if (e.moment != 0.0 || !e.traction.isZero(0.0)) return false;
  return true;
}

std::vector<ElementWorkspace> build_workspaces(const Mesh& mesh) {
  const int p = mesh.ku.degree, q = mesh.kv.degree;
  const GaussRule gu = gauss_legendre(p + 1), gv = gauss_legendre(q + 1);
  std::vector<ElementWorkspace> out;
  out.reserve(mesh.elements.size());
  for (const auto& e : mesh.elements) {
    ElementWorkspace ws;
    ws.element = e.id;
    ws.nodes = e.nodes;
    const Controls Xe = mesh.element_controls(e, mesh.X);
    const double hu = e.su.hi - e.su.lo, hv = e.sv.hi - e.sv.lo;
    for (int j = 0; j <= q; ++j)
      for (int i = 0; i <= p; ++i) {
        QuadPoint qp;
        qp.basis = element_basis(mesh, e, e.su.lo + hu * gu.points(i), e.sv.lo + hv * gv.points(j));
        qp.weight = gu.weights(i) * gv.weights(j) * hu * hv;
        const auto st = metric_and_curvature(surface_point<double>(qp.basis, Xe));
        qp.A_co = st.a_co;
        qp.A_con = st.a_con;
        qp.B_co = st.b_co;
        qp.X = Xe.transpose() * qp.basis.values;
        qp.dA = qp.weight * st.sqrt_det;
        ws.qp.push_back(std::move(qp));
      }
    for (auto side : {Side::XiMin, Side::XiMax, Side::EtaMin, Side::EtaMax}) {
      const auto ids = mesh.boundary_elements(side);
      if (std::find(ids.begin(), ids.end(), e.id) == ids.end()) continue;
      const bool along_u = side == Side::EtaMin || side == Side::EtaMax;
      const GaussRule& g = along_u ? gu : gv;
      for (int k = 0; k < g.points.size(); ++k) {
        EdgePoint ep;
        ep.side = side;
        ep.fixed = along_u ? 1 : 0;
        ep.sign = (side == Side::XiMax || side == Side::EtaMax) ? 1.0 : -1.0;
        double xi, eta;
        if (along_u) {
          xi = e.su.lo + hu * g.points(k);
          eta = side == Side::EtaMin ? e.sv.lo : e.sv.hi;
          ep.weight = g.weights(k) * hu;
        } else {
          xi = side == Side::XiMin ? e.su.lo : e.su.hi;
          eta = e.sv.lo + hv * g.points(k);
          ep.weight = g.weights(k) * hv;
        }
        ep.basis = element_basis(mesh, e, xi, eta);
        const Vec3 A_along = Xe.transpose() * ep.basis.d1.col(along_u ? 0 : 1);
        ep.ref_length = ep.weight * A_along.norm();
        ws.edges.push_back(std::move(ep));
      }
    }
    out.push_back(std::move(ws));
  }
  return out;
}

ElementResult evaluate_element(const ElementWorkspace& ws, const Controls& x, const MaterialSpec& material,
                               const std::vector<std::vector<MaxwellHistory>>& committed, const Loads& loads,
                               double dt, const ElementOptions& options) {
  const int n = static_cast<int>(ws.nodes.size()), ndof = 3 * n;
  ElementResult r;
  r.f_int = Eigen::VectorXd::Zero(ndof);
  r.f_ext = Eigen::VectorXd::Zero(ndof);
  if (options.with_stiffness) r.k = Eigen::MatrixXd::Zero(ndof, ndof);
  r.updated.reserve(ws.qp.size());
  const bool need_bending = material.has_bending();
  BranchOptions bopt;
  bopt.with_tangents = options.with_stiffness;
  bopt.drop_sensitivity = options.drop_sensitivity;

  try {
    Eigen::Matrix<double, 8, Eigen::Dynamic> Bm(8, ndof), DB(8, ndof);
    auto Da = Bm.topRows<4>();
    auto Db = Bm.bottomRows<4>();
    Eigen::Matrix<double, 8, 8> D = Eigen::Matrix<double, 8, 8>::Zero();
    std::vector<Vec3> G(n);
    Eigen::VectorXd Q(n);
    for (std::size_t iq = 0; iq < ws.qp.size(); ++iq) {
      const QuadPoint& q = ws.qp[iq];
      const BasisEval& b = q.basis;
      const auto st = metric_and_curvature(surface_point<double>(b, x));
      const auto g = PointGeometry::make(st.a_co, st.b_co, q.A_co, q.B_co);
      const PointResponse pr = evaluate_material(material, g, committed[iq], dt, bopt);
      const Mat2& tau = pr.total.tau;
      const Mat2& M0 = pr.total.M0;

      for (int A = 0; A < n; ++A) {
        const Mat2 ncov = covariant_hessian(b, A, st.christoffel);
        Q(A) = M0.cwiseProduct(ncov).sum();
        G[A] = b.d1(A, 0) * st.a1_con + b.d1(A, 1) * st.a2_con;
        for (int i = 0; i < 3; ++i) {
          const Vec2 ai(st.a1(i), st.a2(i));
          const Vec2 dN = b.d1.row(A).transpose();
          Da.col(3 * A + i) = flatten(dN * ai.transpose() + ai * dN.transpose());
          Db.col(3 * A + i) = flatten(ncov) * st.n(i);
        }
      }
      r.f_int.noalias() += q.dA * (0.5 * Da.transpose() * flatten(tau) + Db.transpose() * flatten(M0));

      if (options.with_stiffness) {
        const TangentBlocks& t = pr.total.tangents;
        D.topLeftCorner<4, 4>() = 0.25 * q.dA * t.c;
        if (need_bending) {
          D.topRightCorner<4, 4>() = 0.5 * q.dA * t.d;
          D.bottomLeftCorner<4, 4>() = 0.5 * q.dA * t.e;
          D.bottomRightCorner<4, 4>() = q.dA * t.f;
        }
        DB.noalias() = D * Bm;
        r.k.noalias() += Bm.transpose() * DB;
        const double mb = M0.cwiseProduct(st.b_co).sum();
        const Mat3 nn = st.n * st.n.transpose();
        for (int A = 0; A < n; ++A) {
          const Vec2 dA_ = b.d1.row(A).transpose();
          for (int B = 0; B < n; ++B) {
            const Vec2 dB = b.d1.row(B).transpose();
            Mat3 blk = dA_.dot(tau * dB) * Mat3::Identity();
            if (need_bending)
              blk -= Q(A) * G[B] * st.n.transpose() + Q(B) * st.n * G[A].transpose() +
                     mb * dA_.dot(st.a_con * dB) * nn;
            r.k.block<3, 3>(3 * A, 3 * B) += q.dA * blk;
          }
        }
      }

      if (loads.pressure != 0.0 || !loads.tangential.isZero(0.0)) {
        const Vec3 c = st.a1.cross(st.a2);
        const double area = c.norm();
        const Vec3 f_tan = loads.tangential(0) * st.a1 + loads.tangential(1) * st.a2;
        for (int A = 0; A < n; ++A)
          r.f_ext.segment<3>(3 * A) += q.weight * b.values(A) * (loads.pressure * c + area * f_tan);
        if (options.with_stiffness) {
          const Mat3 s1 = skew(st.a1), s2 = skew(st.a2);
          for (int B = 0; B < n; ++B) {
            const Mat3 dc = -s2 * b.d1(B, 0) + s1 * b.d1(B, 1);
            Mat3 blk = loads.pressure * dc;
            blk += (loads.tangential(0) * b.d1(B, 0) + loads.tangential(1) * b.d1(B, 1)) * area * Mat3::Identity() +
                   f_tan * (st.n.transpose() * dc);
            blk *= q.weight;
            for (int A = 0; A < n; ++A) r.k.block<3, 3>(3 * A, 3 * B) -= b.values(A) * blk;
          }
        }
      }
      if (!loads.dead.isZero(0.0))
        for (int A = 0; A < n; ++A) r.f_ext.segment<3>(3 * A) += q.dA * b.values(A) * loads.dead;

      r.dissipation_increment += q.dA * pr.dissipation_increment;
      r.max_local_iterations = std::max(r.max_local_iterations, pr.max_local_iterations);
      if (options.monitor_split)
        for (const auto& h : pr.updated)
          r.max_split_defect = std::max(r.max_split_defect, split_defect(st.a_co, q.A_co, st.b_co, q.B_co, h));
      r.updated.push_back(pr.updated);
    }

    for (const auto& ep : ws.edges) {
      for (const auto& el : loads.edges) {
        if (el.side != ep.side) continue;
        const BasisEval& b = ep.basis;
        if (!el.traction.isZero(0.0))
          for (int A = 0; A < n; ++A) r.f_ext.segment<3>(3 * A) += ep.ref_length * b.values(A) * el.traction;
        if (el.moment == 0.0) continue;
        const Vec3 a1 = x.transpose() * b.d1.col(0), a2 = x.transpose() * b.d1.col(1);
        const EdgeMomentKernel km = edge_moment_kernel(a1, a2, ep.fixed);
        const double s = el.moment * ep.sign * ep.weight;
        for (int A = 0; A < n; ++A) r.f_ext.segment<3>(3 * A) += s * (b.d1(A, 0) * km.v[0] + b.d1(A, 1) * km.v[1]);
        if (!options.with_stiffness) continue;
        for (int B = 0; B < n; ++B) {
          const Mat3 w0 = s * (km.dv[0][0] * b.d1(B, 0) + km.dv[0][1] * b.d1(B, 1));
          const Mat3 w1 = s * (km.dv[1][0] * b.d1(B, 0) + km.dv[1][1] * b.d1(B, 1));
          for (int A = 0; A < n; ++A) r.k.block<3, 3>(3 * A, 3 * B) -= b.d1(A, 0) * w0 + b.d1(A, 1) * w1;
        }
      }
    }
  } catch (const Error& e) {
    throw Error(e.kind(), "element " + std::to_string(ws.element) + ": " + e.what());
  }
  return r;
}

PointOutput point_output(const QuadPoint& q, const Controls& x, const MaterialSpec& material,
                         const std::vector<MaxwellHistory>& histories) {
  PointOutput out;
  const auto sp = surface_point<double>(q.basis, x);
  const auto st = metric_and_curvature(sp);
  const auto g = PointGeometry::make(st.a_co, st.b_co, q.A_co, q.B_co);
  out.a_co = st.a_co;
  out.b_co = st.b_co;
  out.J = g.J;
  out.H = st.H;
  out.x = sp.x;
  out.n = st.n;
  out.sigma.setZero();
  out.moment.setZero();
  for (const auto& m : material.elastic) {
    const Response r = elastic_response(m, g, false);
    out.sigma += r.tau / g.J;
    out.moment += r.M0 / g.J;
  }
  for (std::size_t i = 0; i < material.branches.size(); ++i) {
    const BranchStress s = maxwell_stress_and_moment(material.branches[i], histories[i].ahat, histories[i].bhat, g);
    out.sigma += s.sigma;
    out.moment += s.moment;
  }
  return out;
}

Eigen::VectorXd l2_project(const Mesh& mesh, const std::vector<ElementWorkspace>& ws,
                           const std::vector<std::vector<double>>& values) {
  const int nn = mesh.num_nodes();
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nn);
  for (std::size_t e = 0; e < ws.size(); ++e)
    for (std::size_t iq = 0; iq < ws[e].qp.size(); ++iq) {
      const QuadPoint& q = ws[e].qp[iq];
      for (std::size_t A = 0; A < ws[e].nodes.size(); ++A) {
        rhs(ws[e].nodes[A]) += q.dA * q.basis.values(A) * values[e][iq];
        for (std::size_t B = 0; B < ws[e].nodes.size(); ++B)
          trip.emplace_back(ws[e].nodes[A], ws[e].nodes[B], q.dA * q.basis.values(A) * q.basis.values(B));
      }
    }
  Eigen::SparseMatrix<double> gram(nn, nn);
  gram.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(gram);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any())
    throw Error(ErrorKind::ProjectionError, "Gram matrix of the projection is not positive definite");
  return ldlt.solve(rhs);
}

}  // namespace kls
