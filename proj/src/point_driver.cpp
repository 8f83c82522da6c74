// SPDX-License-Identifier: MIT
#include "kls/point_driver.hpp"

#include "kls/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace kls {

const char* to_string(ProgramKind kind) {
  switch (kind) {
    case ProgramKind::PureShear: return "PureShear";
    case ProgramKind::PureDilatation: return "PureDilatation";
    case ProgramKind::CreepTraction: return "CreepTraction";
    case ProgramKind::Cyclic: return "Cyclic";
    case ProgramKind::BalloonStretch: return "BalloonStretch";
    case ProgramKind::SphereStretchBend: return "SphereStretchBend";
  }
  return "unknown";
}

ProgramKind program_kind_from_string(const std::string& name) {
  for (ProgramKind k : {ProgramKind::PureShear, ProgramKind::PureDilatation, ProgramKind::CreepTraction,
                        ProgramKind::Cyclic, ProgramKind::BalloonStretch, ProgramKind::SphereStretchBend})
    if (name == to_string(k)) return k;
  throw Error(ErrorKind::SchemaError, "unknown program kind '" + name + "'");
}

void KinematicProgram::validate() const {
  if (!(L0 > 0.0)) throw Error(ErrorKind::ParameterError, "L0 must be positive");
  if ((kind == ProgramKind::BalloonStretch || kind == ProgramKind::SphereStretchBend) &&
      (!(R > 0.0) || !(lambda_end > 0.0) || !(t_ref > 0.0)))
    throw Error(ErrorKind::ParameterError, "R, lambda_end and t_ref must be positive");
  if (kind == ProgramKind::Cyclic && (!(omega > 0.0) || !(std::abs(amplitude) < L0)))
    throw Error(ErrorKind::ParameterError, "cyclic program needs omega > 0 and |amplitude| < L0");
}

Vec2 imposed_stretches(const KinematicProgram& p, double t) {
  switch (p.kind) {
    case ProgramKind::PureShear: {
      const double l2 = 1.0 + p.displacement(t) / p.L0;
      return {1.0 / l2, l2};
    }
    case ProgramKind::Cyclic: {
      const double l2 = 1.0 + p.amplitude * std::sin(p.omega * t) / p.L0;
      return {1.0 / l2, l2};
    }
    case ProgramKind::PureDilatation: {
      const double l = 1.0 + p.displacement(t) / p.L0;
      return {l, l};
    }
    case ProgramKind::BalloonStretch:
    case ProgramKind::SphereStretchBend: {
      const double l = std::exp(t * std::log(p.lambda_end) / p.t_ref);
      return {l, l};
    }
    case ProgramKind::CreepTraction: break;
  }
  throw Error(ErrorKind::ParameterError, "creep program has no imposed stretches");
}

namespace {

struct Imposed {
  Mat2 a, b;
  double l1 = 1.0, l2 = 1.0;
};

Imposed stretches(double l1, double l2, const Mat2& b = Mat2::Zero()) {
  Imposed k;
  k.l1 = l1;
  k.l2 = l2;
  k.a << l1 * l1, 0.0, 0.0, l2 * l2;
  k.b = b;
  return k;
}

class PointRun {
 public:
  PointRun(const KinematicProgram& prog, const MaterialSpec& mat) : prog_(prog), mat_(mat) {
    A_ = Mat2::Identity();
    B_ = prog.kind == ProgramKind::SphereStretchBend ? Mat2(-Mat2::Identity() / prog.R) : Mat2(Mat2::Zero());
    hist_ = initial_histories(mat_, A_, B_);
  }

  PointRecord initial() const {
    PointRecord r = record(0.0, stretches(1.0, 1.0, B_), nullptr);
    r.dissipation = 0.0;
    return r;
  }

  PointRecord step(double t, double dt) {
    Imposed k;
    if (prog_.kind == ProgramKind::CreepTraction) {
      k = solve_creep(prog_.traction(t), dt);
    } else {
      const Vec2 l = imposed_stretches(prog_, t);
      k = stretches(l(0), l(1), prog_.kind == ProgramKind::SphereStretchBend ? Mat2(l(0) * B_) : Mat2(Mat2::Zero()));
    }
    const PointGeometry g = PointGeometry::make(k.a, k.b, A_, B_);
    BranchOptions o;
    o.with_tangents = false;
    const PointResponse resp = evaluate_material(mat_, g, hist_, dt, o);
    hist_ = resp.updated;
    dissipation_ += resp.dissipation_increment;
    PointRecord r = record(t, k, &resp);
    r.local_iterations = resp.max_local_iterations;
    return r;
  }

 private:
  // Nominal traction λ1 σ_yy on an edge of reference length L0.
  static double nominal_traction(const Imposed& k, const Mat2& sigma) { return k.l1 * sigma(1, 1) * k.a(1, 1); }

  Imposed solve_creep(double target, double dt) const {
    BranchOptions o;
    o.with_tangents = false;
    auto residual = [&](double l) {
      const Imposed k = stretches(l, l);
      const PointGeometry g = PointGeometry::make(k.a, k.b, A_, B_);
      const PointResponse r = evaluate_material(mat_, g, hist_, dt, o);
      return nominal_traction(k, r.total.tau / g.J) - target;
    };
    const double tol = 1e-12 * std::max(1.0, std::abs(target));
    double l = last_lambda_, lo = l, hi = l;
    double glo = residual(lo), ghi = glo;
    if (std::abs(glo) <= tol) return stretches(l, l);
    for (int i = 0; glo > 0.0 && i < 200; ++i) glo = residual(lo *= 0.9);
    for (int i = 0; ghi < 0.0 && i < 200; ++i) ghi = residual(hi *= 1.1);
    if (glo > 0.0 || ghi < 0.0) {
      std::ostringstream s;
      s << "creep equilibrium could not be bracketed, last bracket [" << lo << ", " << hi << "]";
      throw Error(ErrorKind::LocalNonconvergence, s.str());
    }
    l = std::clamp(l, lo, hi);
    for (int it = 0; it < 100; ++it) {
      const double g = residual(l);
      if (std::abs(g) <= tol) {
        last_lambda_ = l;
        return stretches(l, l);
      }
      (g < 0.0 ? lo : hi) = l;
      const double h = 1e-7 * l;
      const double dg = (residual(l + h) - residual(l - h)) / (2.0 * h);
      double next = dg > 0.0 ? l - g / dg : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (hi - lo <= 1e-15 * hi) {
        last_lambda_ = next;
        return stretches(next, next);
      }
      l = next;
    }
    std::ostringstream s;
    s << "creep equilibrium did not converge, last bracket [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::LocalNonconvergence, s.str());
  }

  PointRecord record(double t, const Imposed& k, const PointResponse* resp) const {
    PointRecord r;
    r.t = t;
    r.lambda1 = k.l1;
    r.lambda2 = k.l2;
    r.displacement = (k.l2 - 1.0) * prog_.L0;
    const PointGeometry g = PointGeometry::make(k.a, k.b, A_, B_);
    r.J = g.J;
    if (resp) {
      r.sigma = resp->total.tau / g.J;
      r.moment = resp->total.M0 / g.J;
      r.sigma_elastic = resp->tau_elastic / g.J;
      for (const Mat2& tb : resp->tau_branch) r.sigma_branch.push_back(tb / g.J);
    } else {
      r.sigma_branch.assign(mat_.branches.size(), Mat2::Zero());
    }
    const SplitState s0 = split_quantities(k.a, A_, A_.inverse());
    r.I1 = s0.I1;
    r.I1_el = s0.I1;
    for (std::size_t i = 0; i < hist_.size(); ++i) {
      const MaxwellHistory& h = hist_[i];
      r.ahat.push_back(h.ahat);
      r.bhat.push_back(h.bhat);
      const SplitState s = split_quantities(k.a, A_, from_voigt(h.ahat), k.b, B_, from_voigt(h.bhat));
      if (i == 0) {
        r.J_el = s.J_el;
        r.J_in = s.J_in;
        r.I1_el = s.I1_el;
      }
      r.split_defect = std::max({r.split_defect, std::abs(s.J - s.J_el * s.J_in),
                                 (s.eps - s.eps_el - s.eps_in).cwiseAbs().maxCoeff(),
                                 (s.kappa - s.kappa_el - s.kappa_in).cwiseAbs().maxCoeff()});
    }
    r.dissipation = dissipation_;
    r.traction = nominal_traction(k, r.sigma);
    if (prog_.kind == ProgramKind::BalloonStretch || prog_.kind == ProgramKind::SphereStretchBend) {
      // In-plane traction N = σ + b·M normal to a cut, balanced by p = 2 T / r.
      const Mat2 N = r.sigma + g.a_con * k.b * r.moment;
      r.pressure = 2.0 * N(0, 0) * k.a(0, 0) / (k.l1 * prog_.R);
    }
    return r;
  }

  const KinematicProgram& prog_;
  const MaterialSpec& mat_;
  Mat2 A_, B_;
  std::vector<MaxwellHistory> hist_;
  double dissipation_ = 0.0;
  mutable double last_lambda_ = 1.0;
};

int step_count(double dt, double t_end) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw Error(ErrorKind::ParameterError, "time step and end time must be positive");
  const long n = std::lround(t_end / dt);
  if (n < 1 || std::abs(n * dt - t_end) > 1e-9 * t_end)
    throw Error(ErrorKind::ParameterError, "end time must be an integer multiple of the time step");
  return static_cast<int>(n);
}

}  // namespace

std::vector<PointRecord> drive(const KinematicProgram& program, const MaterialSpec& material, double dt,
                               double t_end) {
  program.validate();
  const int n = step_count(dt, t_end);
  PointRun run(program, material);
  std::vector<PointRecord> out;
  out.reserve(n + 1);
  out.push_back(run.initial());
  double t = 0.0;
  for (int s = 0; s < n; ++s) {
    const double t_next = t_end * (s + 1) / n;
    try {
      out.push_back(run.step(t_next, t_next - t));
    } catch (const Error& e) {
      throw Error(e.kind(), "step " + std::to_string(s + 1) + ": " + e.what());
    }
    t = t_next;
  }
  return out;
}

std::vector<SweepPoint> frequency_sweep(const KinematicProgram& cyclic, const std::vector<double>& omegas,
                                        const MaterialSpec& material, int cycles, int steps_per_cycle, int threads) {
  if (cycles < 1 || steps_per_cycle < 1) throw Error(ErrorKind::ParameterError, "cycles and steps must be positive");
  std::vector<SweepPoint> out(omegas.size());
  auto one = [&](std::size_t i) {
    KinematicProgram p = cyclic;
    p.kind = ProgramKind::Cyclic;
    p.omega = omegas[i];
    const double t_end = cycles * 2.0 * M_PI / p.omega;
    const auto rec = drive(p, material, t_end / (cycles * steps_per_cycle), t_end);
    out[i] = {p.omega, rec.back().dissipation};
  };
  const int nt = std::clamp(threads, 1, std::max(1, static_cast<int>(omegas.size())));
  std::vector<std::exception_ptr> failures(nt);
  auto worker = [&](int k) {
    try {
      for (std::size_t i = k; i < omegas.size(); i += nt) one(i);
    } catch (...) {
      failures[k] = std::current_exception();
    }
  };
  if (nt == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < nt; ++k) pool.emplace_back(worker, k);
    for (auto& th : pool) th.join();
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return out;
}

}  // namespace kls
