// SPDX-License-Identifier: MIT
// Global assembly, Dirichlet elimination, Newton-Raphson and time stepping.
#pragma once

#include "kls/shell.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <functional>
#include <memory>
#include <vector>

namespace kls {

using Histories = std::vector<std::vector<MaxwellHistory>>;  // [quadrature point][branch]
using SparseMatrix = Eigen::SparseMatrix<double>;

// Global DOF 3 * node + direction is either free or prescribed by a
// displacement history u(t) relative to the reference position.
class DofMap {
 public:
  explicit DofMap(int num_nodes = 0);

  void prescribe(int node, int dir, std::function<double(double)> u);
  void fix(int node, int dir) { prescribe(node, dir, [](double) { return 0.0; }); }
  bool is_free(int dof) const { return free_index_[dof] >= 0; }
  int free_index(int dof) const { return free_index_[dof]; }
  int num_free() const { return num_free_; }
  int num_dofs() const { return static_cast<int>(free_index_.size()); }
  // Writes X + u(t) into every prescribed component of x.
  void apply(double t, const Controls& X, Controls& x) const;

 private:
  void renumber();

  std::vector<int> free_index_;
  std::vector<std::function<double(double)>> value_;
  int num_free_ = 0;
};

struct SolverOptions {
  double rel_tol = 1e-9;   // ‖r‖ ≤ rel_tol · max(1, ‖f_ext‖)
  double step_tol = 1e-10;  // fallback on ‖Δx‖
  int max_iterations = 40;
  int divergence_window = 5;
  int line_search = 0;  // step halvings allowed when a full Newton update does not reduce ‖r‖
  int line_search_after = 8;  // plain Newton iterations before the line search engages
  bool drop_sensitivity = false;
  bool monitor_split = false;
  int threads = 1;  // element evaluation workers; results are merged in element order
};

struct NewtonReport {
  int iterations = 0;
  std::vector<double> residual_norms;
  double load_norm = 0.0;
  bool converged = false;
};

struct StepRecord {
  int step = 0;
  double t = 0.0;
  NewtonReport newton;
  double dissipation = 0.0;  // accumulated up to this step
  int max_local_iterations = 0;
  double max_split_defect = 0.0;
};

struct Assembly {
  Eigen::VectorXd residual, f_ext;  // full length, prescribed rows included
  SparseMatrix K;                   // free x free block
  SparseMatrix K_prescribed;        // free rows x all DOFs, prescribed columns only
  std::vector<Histories> trial;
  double dissipation_increment = 0.0;
  int max_local_iterations = 0;
  double max_split_defect = 0.0;
};

class Model {
 public:
  Model(Mesh mesh, MaterialSpec material);

  const Mesh& mesh() const { return mesh_; }
  const MaterialSpec& material() const { return material_; }
  const std::vector<ElementWorkspace>& workspaces() const { return ws_; }
  DofMap& dofs() { return dofs_; }
  const Controls& x() const { return x_; }
  Controls& x() { return x_; }
  double time() const { return t_; }
  int step() const { return step_; }
  double dissipation() const { return dissipation_; }
  const std::vector<Histories>& histories() const { return committed_; }
  SolverOptions& options() { return options_; }

  void set_loads(std::function<Loads(double)> loads) { loads_ = std::move(loads); }
  Loads loads(double t) const { return loads_ ? loads_(t) : Loads{}; }

  Assembly assemble(double t, double dt, bool with_tangent) const;
  // Newton solve at time t from the current x; leaves trial histories pending.
  NewtonReport solve(double t, double dt);
  void commit();
  StepRecord advance(double dt);
  void run(double dt, double t_end, const std::function<void(const StepRecord&)>& on_step = {});

 private:
  void factorize(const SparseMatrix& K, double t);

  Mesh mesh_;
  MaterialSpec material_;
  std::vector<ElementWorkspace> ws_;
  DofMap dofs_;
  Controls x_;
  std::vector<Histories> committed_, trial_;

  std::function<Loads(double)> loads_;
  SolverOptions options_;
  double t_ = 0.0, dissipation_ = 0.0, pending_dissipation_ = 0.0;
  int step_ = 0, pending_local_ = 0;
  double pending_split_ = 0.0;
  std::shared_ptr<Eigen::SparseLU<SparseMatrix>> lu_;
  bool pattern_ready_ = false;
};

}  // namespace kls
