// SPDX-License-Identifier: MIT
#include "kls/studies.hpp"

#include "kls/kinematics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace kls {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void fit(Study& s, bool with_in) {
  if (s.rows.size() < 2) return;
  std::vector<double> h, e, ein;
  for (const auto& r : s.rows) {
    h.push_back(s.over_mesh ? 1.0 / r.elements() : r.dt);
    e.push_back(r.error);
    ein.push_back(r.error_in);
  }
  s.order = fit_order(h, e);
  if (with_in) s.order_in = fit_order(h, ein);
}

double max_stretch_deviation(const Model& m) {
  double d = 0.0;
  const Mesh& mesh = m.mesh();
  for (const auto& ws : m.workspaces()) {
    const Controls xe = mesh.element_controls(mesh.elements[ws.element], m.x());
    for (const auto& q : ws.qp) {
      const auto st = metric_and_curvature(surface_point<double>(q.basis, xe));
      d = std::max({d, std::abs(std::sqrt(st.a_co(0, 0)) - 1.0), std::abs(std::sqrt(st.a_co(1, 1)) - 1.0)});
    }
  }
  return d;
}

struct BendRun {
  BendField field;
  double stretch_deviation = 0.0;
};

BendRun run_pure_bend(PureBendCase c, int mx, int my, double dt) {
  c.mx = mx;
  c.my = my;
  Model m = make_pure_bend(c);
  BendRun out;
  m.run(dt, c.params.t_end,
        [&](const StepRecord&) { out.stretch_deviation = std::max(out.stretch_deviation, max_stretch_deviation(m)); });
  out.field = pure_bend_field(m);
  return out;
}

double max_relative(const std::vector<double>& v, double ref) {
  double e = 0.0;
  for (double x : v) e = std::max(e, relative_error(x, ref));
  return e;
}

}  // namespace

Study balloon_time_study(const BalloonParams& p, const std::vector<double>& dts) {
  p.validate();
  Study s;
  s.name = "balloon_dt";
  const double ref = balloon_pressure(p, p.t_end).p_total;
  for (double dt : dts) {
    const auto t0 = Clock::now();
    const auto rec = drive(balloon_program(p), balloon_material(p), dt, p.t_end);
    StudyRow r;
    r.dt = dt;
    r.error = relative_error(rec.back().pressure, ref);
    r.seconds = seconds_since(t0);
    s.rows.push_back(r);
  }
  fit(s, false);
  return s;
}

Study sphere_time_study(const SphereParams& p, const std::vector<double>& dts) {
  p.validate();
  Study s;
  s.name = "sphere_dt";
  const double ref = sphere_pressure(p, p.t_end).p_total;
  for (double dt : dts) {
    const auto t0 = Clock::now();
    const auto rec = drive(sphere_program(p), sphere_material(p), dt, p.t_end);
    StudyRow r;
    r.dt = dt;
    r.error = relative_error(rec.back().pressure, ref);
    r.seconds = seconds_since(t0);
    s.rows.push_back(r);
  }
  fit(s, false);
  return s;
}

Study balloon_mesh_study(const BalloonParams& p, const std::vector<int>& ms, double dt) {
  p.validate();
  Study s;
  s.name = "balloon_mesh";
  s.over_mesh = true;
  const double ref = balloon_pressure(p, p.t_end).p_total;
  KinematicProgram prog = balloon_program(p);
  for (int m : ms) {
    const auto t0 = Clock::now();
    Model model = make_membrane_patch(prog, balloon_material(p), m);
    model.run(dt, p.t_end);
    const FieldAverage f = average_fields(model);
    const double lambda = imposed_stretches(prog, p.t_end)(0);
    StudyRow r;
    r.dt = dt;
    r.mx = r.my = m;
    r.error = relative_error(2.0 * f.sigma(0, 0) * lambda / p.R, ref);
    r.seconds = seconds_since(t0);
    s.rows.push_back(r);
  }
  fit(s, false);
  return s;
}

Study pure_bend_time_study(const PureBendCase& c, const std::vector<double>& dts) {
  c.params.validate();
  Study s;
  s.name = "pure_bend_dt";
  const PureBendState ref = pure_bend_solution(c.params, c.params.t_end);
  for (double dt : dts) {
    const auto t0 = Clock::now();
    const BendRun run = run_pure_bend(c, c.mx, c.my, dt);
    StudyRow r;
    r.dt = dt;
    r.mx = c.mx;
    r.my = c.my;
    r.error = max_relative(run.field.kappa, ref.kappa);
    r.error_in = max_relative(run.field.kappa_in, ref.kappa_in);
    r.stretch_deviation = run.stretch_deviation;
    r.seconds = seconds_since(t0);
    s.rows.push_back(r);
  }
  fit(s, true);
  return s;
}

Study pure_bend_mesh_study(const PureBendCase& c, const std::vector<std::pair<int, int>>& meshes, double dt,
                           bool extrapolate) {
  c.params.validate();
  Study s;
  s.name = "pure_bend_mesh";
  s.over_mesh = true;
  const PureBendState ref = pure_bend_solution(c.params, c.params.t_end);
  for (const auto& [mx, my] : meshes) {
    const auto t0 = Clock::now();
    BendRun run = run_pure_bend(c, mx, my, dt);
    if (extrapolate) {
      const BendRun half = run_pure_bend(c, mx, my, 0.5 * dt);
      for (std::size_t i = 0; i < run.field.kappa.size(); ++i) {
        run.field.kappa[i] = 2.0 * half.field.kappa[i] - run.field.kappa[i];
        run.field.kappa_in[i] = 2.0 * half.field.kappa_in[i] - run.field.kappa_in[i];
      }
      run.stretch_deviation = std::max(run.stretch_deviation, half.stretch_deviation);
    }
    StudyRow r;
    r.dt = dt;
    r.mx = mx;
    r.my = my;
    r.error = max_relative(run.field.kappa, ref.kappa);
    r.error_in = max_relative(run.field.kappa_in, ref.kappa_in);
    r.stretch_deviation = run.stretch_deviation;
    r.seconds = seconds_since(t0);
    s.rows.push_back(r);
  }
  fit(s, true);
  return s;
}

}  // namespace kls
