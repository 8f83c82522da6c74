// SPDX-License-Identifier: MIT
#include "kls/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>

namespace kls {

DofMap::DofMap(int num_nodes) : free_index_(3 * num_nodes, 0), value_(3 * num_nodes) { renumber(); }

void DofMap::prescribe(int node, int dir, std::function<double(double)> u) {
  const int dof = 3 * node + dir;
  if (node < 0 || dir < 0 || dir > 2 || dof >= num_dofs())
    throw Error(ErrorKind::ParameterError, "prescribed DOF out of range");
  value_[dof] = std::move(u);
  free_index_[dof] = -1;
  renumber();
}

void DofMap::renumber() {
  num_free_ = 0;
  for (std::size_t d = 0; d < free_index_.size(); ++d) free_index_[d] = value_[d] ? -1 : num_free_++;
}

void DofMap::apply(double t, const Controls& X, Controls& x) const {
  for (int d = 0; d < num_dofs(); ++d)
    if (value_[d]) x(d / 3, d % 3) = X(d / 3, d % 3) + value_[d](t);
}

Model::Model(Mesh mesh, MaterialSpec material)
    : mesh_(std::move(mesh)), material_(std::move(material)), dofs_(mesh_.num_nodes()), x_(mesh_.X) {
  ws_ = build_workspaces(mesh_);
  for (const auto& w : ws_) {
    Histories h;
    for (const auto& q : w.qp) h.push_back(initial_histories(material_, q.A_con, q.B_co));
    committed_.push_back(std::move(h));
  }
  trial_ = committed_;
}

Assembly Model::assemble(double t, double dt, bool with_tangent) const {
  Assembly out;
  const int nd = dofs_.num_dofs();
  out.residual = Eigen::VectorXd::Zero(nd);
  out.f_ext = Eigen::VectorXd::Zero(nd);
  out.trial.reserve(ws_.size());
  const Loads loads = this->loads(t);
  ElementOptions eo;
  eo.with_stiffness = with_tangent;
  eo.drop_sensitivity = options_.drop_sensitivity;
  eo.monitor_split = options_.monitor_split;
  std::vector<Eigen::Triplet<double>> trip, trip_p;
  if (with_tangent) {
    std::size_t nnz = 0;
    for (const auto& w : ws_) nnz += 9 * w.nodes.size() * w.nodes.size();
    trip.reserve(nnz);
  }
  const int ne = static_cast<int>(ws_.size());
  std::vector<ElementResult> results(ne);
  auto evaluate_range = [&](int first, int last) {
    for (int e = first; e < last; ++e) {
      const Controls xe = mesh_.element_controls(mesh_.elements[ws_[e].element], x_);
      results[e] = evaluate_element(ws_[e], xe, material_, committed_[e], loads, dt, eo);
    }
  };
  const int nt = std::clamp(options_.threads, 1, std::max(1, ne));
  if (nt == 1) {
    evaluate_range(0, ne);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(nt);
    for (int k = 0; k < nt; ++k)
      pool.emplace_back([&, k] {
        try {
          evaluate_range(ne * k / nt, ne * (k + 1) / nt);
        } catch (...) {
          failures[k] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (const auto& f : failures)
      if (f) std::rethrow_exception(f);
  }
  for (int e = 0; e < ne; ++e) {
    const auto& w = ws_[e];
    ElementResult& r = results[e];
    const int n = static_cast<int>(w.nodes.size());
    for (int A = 0; A < n; ++A)
      for (int i = 0; i < 3; ++i) {
        const int gi = 3 * w.nodes[A] + i;
        out.residual(gi) += r.f_int(3 * A + i) - r.f_ext(3 * A + i);
        out.f_ext(gi) += r.f_ext(3 * A + i);
        if (!with_tangent || !dofs_.is_free(gi)) continue;
        const int fi = dofs_.free_index(gi);
        for (int B = 0; B < n; ++B)
          for (int j = 0; j < 3; ++j) {
            const int gj = 3 * w.nodes[B] + j;
            if (dofs_.is_free(gj))
              trip.emplace_back(fi, dofs_.free_index(gj), r.k(3 * A + i, 3 * B + j));
            else
              trip_p.emplace_back(fi, gj, r.k(3 * A + i, 3 * B + j));
          }
      }
    out.dissipation_increment += r.dissipation_increment;
    out.max_local_iterations = std::max(out.max_local_iterations, r.max_local_iterations);
    out.max_split_defect = std::max(out.max_split_defect, r.max_split_defect);
    out.trial.push_back(std::move(r.updated));
  }
  if (with_tangent) {
    out.K.resize(dofs_.num_free(), dofs_.num_free());
    out.K.setFromTriplets(trip.begin(), trip.end());
    out.K_prescribed.resize(dofs_.num_free(), nd);
    out.K_prescribed.setFromTriplets(trip_p.begin(), trip_p.end());
  }
  return out;
}

void Model::factorize(const SparseMatrix& K, double t) {
  if (!lu_) lu_ = std::make_shared<Eigen::SparseLU<SparseMatrix>>();
  if (!pattern_ready_) {
    lu_->analyzePattern(K);
    pattern_ready_ = true;
  }
  lu_->factorize(K);
  if (lu_->info() != Eigen::Success)
    throw Error(ErrorKind::SolverSingular, "singular tangent at t = " + std::to_string(t));
}

NewtonReport Model::solve(double t, double dt) {
  NewtonReport rep;
  const int nf = dofs_.num_free(), nd = dofs_.num_dofs();
  auto restrict_free = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd r(nf);
    for (int d = 0; d < nd; ++d)
      if (dofs_.is_free(d)) r(dofs_.free_index(d)) = v(d);
    return r;
  };
  auto apply_free = [&](const Eigen::VectorXd& dx) {
    for (int d = 0; d < nd; ++d)
      if (dofs_.is_free(d)) x_(d / 3, d % 3) += dx(dofs_.free_index(d));
  };
  Controls target = x_;
  dofs_.apply(t, mesh_.X, target);
  Eigen::VectorXd jump = Eigen::VectorXd::Zero(nd);
  for (int d = 0; d < nd; ++d)
    if (!dofs_.is_free(d)) jump(d) = target(d / 3, d % 3) - x_(d / 3, d % 3);
  if (nf > 0 && !jump.isZero(0.0)) {
    // Linearized response of the free DOFs to the prescribed increment.
    const Assembly a = assemble(t, dt, true);
    factorize(a.K, t);
    const Eigen::VectorXd rhs = -restrict_free(a.residual) - a.K_prescribed * jump;
    const Eigen::VectorXd dx = lu_->solve(rhs);
    if (lu_->info() != Eigen::Success || !dx.allFinite())
      throw Error(ErrorKind::SolverSingular, "tangent solve failed at t = " + std::to_string(t));
    apply_free(dx);
    rep.iterations = 1;
  }
  dofs_.apply(t, mesh_.X, x_);
  double last_step = std::numeric_limits<double>::infinity();
  int growth = 0;
  std::optional<Assembly> carried;
  for (int it = 0;; ++it) {
    Assembly a = carried ? std::move(*carried) : assemble(t, dt, true);
    carried.reset();
    const Eigen::VectorXd r = restrict_free(a.residual);
    const double rn = r.norm();
    rep.load_norm = restrict_free(a.f_ext).norm();
    if (!std::isfinite(rn))
      throw Error(ErrorKind::SolverDivergence, "residual is not finite at t = " + std::to_string(t));
    if (!rep.residual_norms.empty()) growth = rn > rep.residual_norms.back() ? growth + 1 : 0;
    rep.residual_norms.push_back(rn);
    if (rn <= options_.rel_tol * std::max(1.0, rep.load_norm) || last_step <= options_.step_tol) {
      rep.converged = true;
      trial_ = std::move(a.trial);
      pending_dissipation_ = a.dissipation_increment;
      pending_local_ = a.max_local_iterations;
      pending_split_ = a.max_split_defect;
      break;
    }
    if (growth >= options_.divergence_window)
      throw Error(ErrorKind::SolverDivergence,
                  "residual grew over " + std::to_string(growth) + " iterations at t = " + std::to_string(t));
    if (it >= options_.max_iterations)
      throw Error(ErrorKind::SolverDivergence,
                  "no convergence after " + std::to_string(it) + " iterations at t = " + std::to_string(t) +
                      ", residual " + std::to_string(rn));
    factorize(a.K, t);
    const Eigen::VectorXd dx = lu_->solve(-r);
    if (lu_->info() != Eigen::Success || !dx.allFinite())
      throw Error(ErrorKind::SolverSingular, "tangent solve failed at t = " + std::to_string(t));
    double alpha = 1.0;
    apply_free(dx);
    for (int k = 0; it >= options_.line_search_after && k < options_.line_search; ++k) {
      try {
        carried = assemble(t, dt, true);
        if (restrict_free(carried->residual).norm() < rn) break;
      } catch (const Error&) {
      }
      carried.reset();
      alpha *= 0.5;
      apply_free(-alpha * dx);
    }
    last_step = alpha * dx.norm();
    ++rep.iterations;
  }
  return rep;
}

void Model::commit() {
  committed_ = trial_;
  dissipation_ += pending_dissipation_;
  pending_dissipation_ = 0.0;
}

StepRecord Model::advance(double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::ParameterError, "time step must be positive");
  StepRecord rec;
  rec.step = step_ + 1;
  rec.t = t_ + dt;
  try {
    rec.newton = solve(rec.t, dt);
  } catch (const Error& e) {
    throw Error(e.kind(), "step " + std::to_string(rec.step) + ": " + e.what());
  }
  rec.max_local_iterations = pending_local_;
  rec.max_split_defect = pending_split_;
  commit();
  t_ = rec.t;
  step_ = rec.step;
  rec.dissipation = dissipation_;
  return rec;
}

void Model::run(double dt, double t_end, const std::function<void(const StepRecord&)>& on_step) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw Error(ErrorKind::ParameterError, "time step and end time must be positive");
  const int n = static_cast<int>(std::llround(t_end / dt));
  if (n < 1 || std::abs(n * dt - t_end) > 1e-9 * t_end)
    throw Error(ErrorKind::ParameterError, "end time must be an integer multiple of the time step");
  for (int s = 0; s < n; ++s) {
    // Exact step times avoid drift in the accumulated time.
    const double t_next = t_end * (s + 1) / n;
    const StepRecord rec = advance(t_next - t_);
    if (on_step) on_step(rec);
  }
}

}  // namespace kls
