// SPDX-License-Identifier: MIT
#include "kls/scenarios.hpp"

#include "kls/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace kls {

Vec3 surface_at(const Mesh& mesh, const Controls& x, double xi, double eta) {
  for (const Element& e : mesh.elements) {
    const bool in_u = xi >= e.su.lo && (xi < e.su.hi || (xi == e.su.hi && e.iu == mesh.elements_u() - 1));
    const bool in_v = eta >= e.sv.lo && (eta < e.sv.hi || (eta == e.sv.hi && e.iv == mesh.elements_v() - 1));
    if (!in_u || !in_v) continue;
    const BasisEval b = nurbs_eval(bspline_on_span(e.cu, mesh.ku.degree, e.su, xi),
                                   bspline_on_span(e.cv, mesh.kv.degree, e.sv, eta), mesh.element_weights(e));
    return surface_point<double>(b, mesh.element_controls(e, x)).x;
  }
  throw Error(ErrorKind::ParameterError, "parameter point outside the patch");
}

FieldAverage average_fields(const Model& model) {
  FieldAverage f;
  f.J = 0.0;
  const Mesh& m = model.mesh();
  for (std::size_t e = 0; e < model.workspaces().size(); ++e) {
    const auto& ws = model.workspaces()[e];
    const Controls xe = m.element_controls(m.elements[ws.element], model.x());
    for (std::size_t q = 0; q < ws.qp.size(); ++q) {
      const PointOutput o = point_output(ws.qp[q], xe, model.material(), model.histories()[e][q]);
      const double w = ws.qp[q].dA;
      f.sigma += w * o.sigma;
      f.moment += w * o.moment;
      f.J += w * o.J;
      f.area += w;
    }
  }
  f.sigma /= f.area;
  f.moment /= f.area;
  f.J /= f.area;
  return f;
}

void prescribe_homogeneous_stretch(Model& model, std::function<Vec2(double)> stretch) {
  const Mesh& m = model.mesh();
  std::vector<bool> boundary(m.num_nodes(), false);
  for (Side s : {Side::XiMin, Side::XiMax, Side::EtaMin, Side::EtaMax})
    for (int n : m.boundary_nodes(s)) boundary[n] = true;
  for (int n = 0; n < m.num_nodes(); ++n) {
    if (boundary[n]) {
      const double X = m.X(n, 0), Y = m.X(n, 1);
      model.dofs().prescribe(n, 0, [X, stretch](double t) { return (stretch(t)(0) - 1.0) * X; });
      model.dofs().prescribe(n, 1, [Y, stretch](double t) { return (stretch(t)(1) - 1.0) * Y; });
    }
    model.dofs().fix(n, 2);
  }
}

void equibiaxial_traction(Model& model, Schedule traction) {
  const Mesh& m = model.mesh();
  for (int n : m.boundary_nodes(Side::XiMin)) model.dofs().fix(n, 0);
  for (int n : m.boundary_nodes(Side::EtaMin)) model.dofs().fix(n, 1);
  for (int n = 0; n < m.num_nodes(); ++n) model.dofs().fix(n, 2);
  model.set_loads([traction](double t) {
    Loads l;
    const double v = traction(t);
    EdgeLoad ex, ey;
    ex.side = Side::XiMax;
    ex.traction = Vec3(v, 0.0, 0.0);
    ey.side = Side::EtaMax;
    ey.traction = Vec3(0.0, v, 0.0);
    l.edges = {ex, ey};
    return l;
  });
}

MaterialSpec balloon_material(const BalloonParams& p) {
  ElasticModel mem;
  mem.kind = ModelKind::IncompressibleNeoHookeanMembrane;
  mem.mu = p.mu;
  MaxwellBranch b;
  b.membrane = BranchMembrane::NeoHookean;
  b.mu1 = p.mu1;
  b.eta_s = p.eta_s;
  return {{mem}, {b}};
}

KinematicProgram balloon_program(const BalloonParams& p) {
  KinematicProgram k;
  k.kind = ProgramKind::BalloonStretch;
  k.R = p.R;
  k.lambda_end = p.lambda_end;
  k.t_ref = p.t_end;
  return k;
}

MaterialSpec sphere_material(const SphereParams& p) {
  ElasticModel mem;
  mem.kind = ModelKind::IncompressibleNeoHookeanMembrane;
  mem.mu = p.mu;
  ElasticModel bend;
  bend.kind = ModelKind::HelfrichBending;
  bend.k = p.k;
  bend.H0 = p.H0;
  MaxwellBranch b;
  b.membrane = BranchMembrane::NeoHookean;
  b.mu1 = p.mu1;
  b.eta_s = p.eta_s;
  b.bending = true;
  b.c1 = p.c1;
  b.eta_b = p.eta_b;
  return {{mem, bend}, {b}};
}

KinematicProgram sphere_program(const SphereParams& p) {
  KinematicProgram k;
  k.kind = ProgramKind::SphereStretchBend;
  k.R = p.R;
  k.lambda_end = p.lambda_end;
  k.t_ref = p.t_end;
  return k;
}

Model make_membrane_patch(const KinematicProgram& program, const MaterialSpec& material, int m) {
  program.validate();
  if (program.kind == ProgramKind::SphereStretchBend)
    throw Error(ErrorKind::ParameterError, "the flat membrane patch cannot impose curvature");
  if (m < 1) throw Error(ErrorKind::ParameterError, "patch needs at least one element per direction");
  Model model(flat_patch(program.L0, program.L0, 2, 2, m, m), material);
  if (program.kind == ProgramKind::CreepTraction) {
    equibiaxial_traction(model, program.traction);
  } else {
    prescribe_homogeneous_stretch(model, [program](double t) { return imposed_stretches(program, t); });
  }
  return model;
}

MaterialSpec pure_bend_material(const PureBendCase& c) {
  ElasticModel mem;
  mem.kind = ModelKind::NeoHookeanMembrane;
  mem.mu = c.mu;
  mem.K = c.K;
  ElasticModel bend;
  bend.kind = ModelKind::KoiterBending;
  bend.c = c.params.c;
  MaxwellBranch b;
  b.bending = true;
  b.c1 = c.params.c1;
  b.eta_b = c.params.eta_b;
  return {{mem, bend}, {b}};
}

Model make_pure_bend(const PureBendCase& c) {
  c.params.validate();
  Model model(flat_patch(c.L, c.params.S, 2, 2, c.mx, c.my), pure_bend_material(c));
  const Mesh& m = model.mesh();
  const PureBendParams p = c.params;
  for (int n : m.boundary_nodes(Side::EtaMin)) {
    model.dofs().fix(n, 1);
    model.dofs().fix(n, 2);
  }
  for (int n : m.boundary_nodes(Side::EtaMax)) {
    model.dofs().prescribe(n, 1, [p](double t) { return pure_bend_solution(p, std::min(t, p.t_end)).u_y; });
    model.dofs().fix(n, 2);
  }
  model.dofs().fix(m.node(0, 0), 0);
  model.set_loads([p](double t) {
    const PureBendState s = pure_bend_solution(p, std::min(t, p.t_end));
    Loads l;
    l.pressure = s.p;
    EdgeLoad lo, hi;
    lo.side = Side::EtaMin;
    lo.moment = s.M;
    hi.side = Side::EtaMax;
    hi.moment = s.M;
    l.edges = {lo, hi};
    return l;
  });
  return model;
}

BendField pure_bend_field(const Model& model) {
  BendField f;
  const Mesh& m = model.mesh();
  for (std::size_t e = 0; e < model.workspaces().size(); ++e) {
    const auto& ws = model.workspaces()[e];
    const Controls xe = m.element_controls(m.elements[ws.element], model.x());
    for (std::size_t q = 0; q < ws.qp.size(); ++q) {
      const auto st = metric_and_curvature(surface_point<double>(ws.qp[q].basis, xe));
      const MaxwellHistory& h = model.histories()[e][q][0];
      f.kappa.push_back((st.a_con * st.b_co)(1, 1));
      f.kappa_in.push_back((from_voigt(h.ahat) * from_voigt(h.bhat))(1, 1));
      f.weight.push_back(ws.qp[q].dA);
    }
  }
  return f;
}

BendMeasure measure_pure_bend(const Model& model, const PureBendParams& p, double t) {
  const PureBendState ref = pure_bend_solution(p, t);
  const BendField f = pure_bend_field(model);
  BendMeasure out;
  double area = 0.0;
  for (std::size_t i = 0; i < f.kappa.size(); ++i) {
    out.kappa += f.weight[i] * f.kappa[i];
    out.kappa_in += f.weight[i] * f.kappa_in[i];
    area += f.weight[i];
    out.eps_kappa = std::max(out.eps_kappa, relative_error(f.kappa[i], ref.kappa));
    out.eps_kappa_in = std::max(out.eps_kappa_in, relative_error(f.kappa_in[i], ref.kappa_in));
  }
  out.kappa /= area;
  out.kappa_in /= area;
  const Mesh& m = model.mesh();
  for (const auto& ws : model.workspaces()) {
    const Controls xe = m.element_controls(m.elements[ws.element], model.x());
    for (const auto& q : ws.qp) {
      const auto st = metric_and_curvature(surface_point<double>(q.basis, xe));
      out.stretch_deviation = std::max({out.stretch_deviation, std::abs(std::sqrt(st.a_co(0, 0)) - 1.0),
                                        std::abs(std::sqrt(st.a_co(1, 1)) - 1.0)});
    }
  }
  return out;
}

Model make_scordelis(const ScordelisCase& c) {
  if (!(c.R > 0.0) || !(c.L > 0.0) || !(c.t0 > 0.0))
    throw Error(ErrorKind::ParameterError, "Scordelis-Lo radius, length and ramp time must be positive");
  Model model(cylinder_patch(c.R, c.L, c.half_angle_deg * M_PI / 180.0, c.mx, c.my), c.material);
  const Mesh& m = model.mesh();
  for (Side s : {Side::XiMin, Side::XiMax})
    for (int n : m.boundary_nodes(s)) {
      model.dofs().fix(n, 1);
      model.dofs().fix(n, 2);
    }
  model.dofs().fix(m.node(0, m.nv() / 2), 0);
  // The roof snaps through early in the load ramp.
  model.options().line_search = 8;
  const double f0 = c.f0, t0 = c.t0;
  model.set_loads([f0, t0](double t) {
    Loads l;
    l.dead = Vec3(0.0, 0.0, -f0 * std::min(t / t0, 1.0) / 25.0);
    return l;
  });
  return model;
}

double scordelis_center_deflection(const Model& model) {
  const Mesh& m = model.mesh();
  const double xi = 0.5 * (m.ku.knots.front() + m.ku.knots.back());
  const double eta = 0.5 * (m.kv.knots.front() + m.kv.knots.back());
  return surface_at(m, model.x(), xi, eta)(2) - surface_at(m, m.X, xi, eta)(2);
}

}  // namespace kls
