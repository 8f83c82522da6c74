// SPDX-License-Identifier: MIT
#include "kls/runner.hpp"

#include "kls/studies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <thread>

namespace kls {

using nlohmann::json;

int Table::column(const std::string& n) const {
  const auto it = std::find(header.begin(), header.end(), n);
  if (it == header.end()) throw Error(ErrorKind::ParameterError, "table " + name + " has no column " + n);
  return static_cast<int>(it - header.begin());
}

std::vector<double> Table::values(const std::string& n) const {
  const int k = column(n);
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r[k]);
  return out;
}

void Table::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  char buf[32];
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", r[i]);
      os << (i ? "," : "") << buf;
    }
    os << '\n';
  }
}

const Table& RunResult::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return t;
  throw Error(ErrorKind::ParameterError, "no table named " + name);
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SchemaError: return 2;
    case ErrorKind::ParameterError:
    case ErrorKind::UndefinedError:
    case ErrorKind::InvalidDegree:
    case ErrorKind::UnsupportedKnotVector:
    case ErrorKind::InvalidWeight: return 3;
    case ErrorKind::UnsupportedStudy: return 5;
    case ErrorKind::IoError: return 6;
    default: return 4;
  }
}

namespace {

BalloonParams balloon_params(const ScenarioConfig& c) {
  BalloonParams p;
  p.R = c.param("R");
  p.mu = c.param("mu");
  p.mu1 = c.param("mu1");
  p.eta_s = c.param("eta_s");
  p.lambda_end = c.param("lambda_end");
  p.t_end = c.param("t_end");
  p.validate();
  return p;
}

SphereParams sphere_params(const ScenarioConfig& c) {
  SphereParams p;
  p.R = c.param("R");
  p.mu = c.param("mu");
  p.mu1 = c.param("mu1");
  p.c1 = c.param("c1");
  p.k = c.param("k");
  p.H0 = c.param("H0");
  p.eta_s = c.param("eta_s");
  p.eta_b = c.param("eta_b");
  p.lambda_end = c.param("lambda_end");
  p.t_end = c.param("t_end");
  p.validate();
  return p;
}

PureBendCase bend_case(const ScenarioConfig& c) {
  PureBendCase b;
  b.L = c.param("L");
  b.mu = c.param("mu");
  b.K = c.param("K");
  b.params.S = c.param("S");
  b.params.c = c.param("c");
  b.params.c1 = c.param("c1");
  b.params.eta_b = c.param("eta_b");
  b.params.kappa_end = c.param("kappa_end");
  b.params.t_end = c.param("t_end");
  b.mx = c.mx;
  b.my = c.my;
  b.params.validate();
  return b;
}

ScordelisCase roof_case(const ScenarioConfig& c) {
  ScordelisCase r;
  r.R = c.param("R");
  r.L = c.param("L");
  r.half_angle_deg = c.param("half_angle_deg");
  r.f0 = c.param("f0");
  r.t0 = c.param("t0");
  r.mx = c.mx;
  r.my = c.my;
  r.material = c.material;
  return r;
}

// Point problems resolved to a program, a material and an optional oracle.
struct PointSetup {
  KinematicProgram program;
  MaterialSpec material;
  std::function<double(double)> pressure_oracle;
};

PointSetup point_setup(const ScenarioConfig& c) {
  PointSetup s;
  switch (c.problem) {
    case Problem::Point:
      s.program = c.program;
      s.material = c.material;
      break;
    case Problem::Balloon: {
      const BalloonParams p = balloon_params(c);
      s.program = balloon_program(p);
      s.material = balloon_material(p);
      s.pressure_oracle = [p](double t) { return balloon_pressure(p, t).p_total; };
      break;
    }
    case Problem::Sphere: {
      const SphereParams p = sphere_params(c);
      s.program = sphere_program(p);
      s.material = sphere_material(p);
      s.pressure_oracle = [p](double t) { return sphere_pressure(p, t).p_total; };
      break;
    }
    default: throw Error(ErrorKind::SchemaError, std::string("problem: ") + to_string(c.problem) + " is not a point-driver problem");
  }
  return s;
}

RunResult run_point(const ScenarioConfig& c) {
  const PointSetup s = point_setup(c);
  const auto rec = drive(s.program, s.material, c.dt, c.t_end);
  Table t;
  t.name = "series";
  t.header = {"t",        "lambda1",   "lambda2", "displacement", "traction", "sigma11", "sigma12", "sigma22",
              "sigma_el11", "sigma_el22", "J",     "J_el",         "J_in",     "I1",      "I1_el",   "ahat11",
              "ahat12",   "ahat22",    "bhat11",  "bhat22",       "moment11", "moment22", "dissipation", "pressure",
              "local_iterations", "split_defect"};
  if (s.pressure_oracle) t.header.push_back("pressure_exact");
  json summary;
  int max_local = 0;
  double max_split = 0.0;
  bool monotone = true;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const PointRecord& r = rec[i];
    const Vec3 ah = r.ahat.empty() ? Vec3::Zero() : r.ahat[0];
    const Vec3 bh = r.bhat.empty() ? Vec3::Zero() : r.bhat[0];
    std::vector<double> row{r.t,        r.lambda1,          r.lambda2,          r.displacement,   r.traction,
                            r.sigma(0, 0), r.sigma(0, 1),   r.sigma(1, 1),      r.sigma_elastic(0, 0),
                            r.sigma_elastic(1, 1), r.J,      r.J_el,             r.J_in,           r.I1,
                            r.I1_el,    ah(0),              ah(1),              ah(2),            bh(0),
                            bh(2),      r.moment(0, 0),     r.moment(1, 1),     r.dissipation,    r.pressure,
                            static_cast<double>(r.local_iterations), r.split_defect};
    if (s.pressure_oracle) row.push_back(s.pressure_oracle(r.t));
    t.rows.push_back(std::move(row));
    max_local = std::max(max_local, r.local_iterations);
    max_split = std::max(max_split, r.split_defect);
    if (i > 0 && r.dissipation < rec[i - 1].dissipation) monotone = false;
  }
  summary["steps"] = rec.size() - 1;
  summary["t_end"] = rec.back().t;
  summary["dissipation"] = rec.back().dissipation;
  summary["max_local_iterations"] = max_local;
  summary["max_split_defect"] = max_split;
  summary["dissipation_nondecreasing"] = monotone;
  if (s.pressure_oracle) {
    summary["pressure"] = rec.back().pressure;
    summary["pressure_exact"] = s.pressure_oracle(rec.back().t);
  }
  return {{t}, summary};
}

// Builds the FE model of a configuration and the per-step output columns.
struct FeSetup {
  Model model;
  std::vector<std::string> columns;
  std::function<std::vector<double>(const Model&, double)> sample;
};

FeSetup fe_setup(const ScenarioConfig& c) {
  switch (c.problem) {
    case Problem::PureBend: {
      const PureBendCase b = bend_case(c);
      const PureBendParams p = b.params;
      return {make_pure_bend(b),
              {"kappa", "kappa_in", "kappa_exact", "kappa_in_exact", "eps_kappa", "eps_kappa_in", "stretch_deviation",
               "moment", "pressure", "u_y"},
              [p](const Model& m, double t) {
                const PureBendState ref = pure_bend_solution(p, std::min(t, p.t_end));
                if (t == 0.0) return std::vector<double>{0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
                const BendMeasure b = measure_pure_bend(m, p, std::min(t, p.t_end));
                return std::vector<double>{b.kappa,      b.kappa_in,     ref.kappa, ref.kappa_in,
                                           b.eps_kappa,  b.eps_kappa_in, b.stretch_deviation,
                                           ref.M,        ref.p,          ref.u_y};
              }};
    }
    case Problem::ScordelisLo:
      return {make_scordelis(roof_case(c)), {"u_z"},
              [](const Model& m, double) { return std::vector<double>{scordelis_center_deflection(m)}; }};
    case Problem::MembranePatch: {
      const KinematicProgram prog = c.program;
      return {make_membrane_patch(prog, c.material, c.mx),
              {"lambda1", "lambda2", "sigma11", "sigma12", "sigma22", "J", "traction"},
              [prog](const Model& m, double) {
                const Vec3 corner = surface_at(m.mesh(), m.x(), prog.L0, prog.L0);
                const double l1 = corner(0) / prog.L0, l2 = corner(1) / prog.L0;
                const FieldAverage f = average_fields(m);
                return std::vector<double>{l1, l2, f.sigma(0, 0), f.sigma(0, 1), f.sigma(1, 1), f.J,
                                           l1 * f.sigma(1, 1) * l2 * l2};
              }};
    }
    default: throw Error(ErrorKind::SchemaError, std::string("problem: ") + to_string(c.problem) + " is not a finite element problem");
  }
}

RunResult run_fe(const ScenarioConfig& c) {
  FeSetup s = fe_setup(c);
  Model& m = s.model;
  m.options().threads = c.threads;
  m.options().monitor_split = true;
  Table t;
  t.name = "series";
  t.header = {"t", "newton_iterations", "local_iterations", "split_defect", "dissipation"};
  t.header.insert(t.header.end(), s.columns.begin(), s.columns.end());
  auto push = [&](double time, int newton, int local, double split) {
    std::vector<double> row{time, static_cast<double>(newton), static_cast<double>(local), split, m.dissipation()};
    const auto extra = s.sample(m, time);
    row.insert(row.end(), extra.begin(), extra.end());
    t.rows.push_back(std::move(row));
  };
  push(0.0, 0, 0, 0.0);
  int max_newton = 0, max_local = 0;
  double max_split = 0.0, last_d = 0.0;
  bool monotone = true;
  m.run(c.dt, c.t_end, [&](const StepRecord& r) {
    push(r.t, r.newton.iterations, r.max_local_iterations, r.max_split_defect);
    max_newton = std::max(max_newton, r.newton.iterations);
    max_local = std::max(max_local, r.max_local_iterations);
    max_split = std::max(max_split, r.max_split_defect);
    if (r.dissipation < last_d) monotone = false;
    last_d = r.dissipation;
  });
  json summary;
  summary["steps"] = m.step();
  summary["t_end"] = m.time();
  summary["elements"] = m.mesh().elements.size();
  summary["dissipation"] = m.dissipation();
  summary["max_newton_iterations"] = max_newton;
  summary["max_local_iterations"] = max_local;
  summary["max_split_defect"] = max_split;
  summary["dissipation_nondecreasing"] = monotone;
  for (std::size_t k = 0; k < s.columns.size(); ++k) summary[s.columns[k]] = t.rows.back()[5 + k];
  return {{t}, summary};
}

Table study_table(const Study& s) {
  Table t;
  t.name = s.name;
  if (s.over_mesh)
    t.header = {"elements", "mx", "my", "dt", "error", "error_in", "stretch_deviation"};
  else
    t.header = {"dt", "mx", "my", "error", "error_in", "stretch_deviation"};
  for (const auto& r : s.rows) {
    if (s.over_mesh)
      t.rows.push_back({static_cast<double>(r.elements()), static_cast<double>(r.mx), static_cast<double>(r.my), r.dt,
                        r.error, r.error_in, r.stretch_deviation});
    else
      t.rows.push_back({r.dt, static_cast<double>(r.mx), static_cast<double>(r.my), r.error, r.error_in,
                        r.stretch_deviation});
  }
  return t;
}

json study_summary(const Study& s) {
  json j;
  if (s.order) j["order"] = s.order->slope;
  if (s.order_in) j["order_in"] = s.order_in->slope;
  double dev = 0.0;
  for (const auto& r : s.rows) dev = std::max(dev, r.stretch_deviation);
  j["max_stretch_deviation"] = dev;
  return j;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const int nt = std::clamp(threads, 1, std::max(1, static_cast<int>(n)));
  std::vector<std::exception_ptr> failures(nt);
  auto worker = [&](int k) {
    try {
      for (std::size_t i = k; i < n; i += nt) fn(i);
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
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

ScenarioConfig with_viscosity(ScenarioConfig c, double eta) {
  for (auto& b : c.material.branches) b.eta_s = b.eta_b = eta;
  if (c.problem == Problem::Balloon) c.parameters["eta_s"] = eta;
  if (c.problem == Problem::Sphere) c.parameters["eta_s"] = c.parameters["eta_b"] = eta;
  if (c.problem == Problem::PureBend) c.parameters["eta_b"] = eta;
  return c;
}

std::string main_output(const ScenarioConfig& c) {
  switch (c.problem) {
    case Problem::Balloon:
    case Problem::Sphere: return "pressure";
    case Problem::PureBend: return "kappa";
    case Problem::ScordelisLo: return "u_z";
    case Problem::Point:
      return c.program.kind == ProgramKind::CreepTraction ? "displacement" : "sigma22";
    case Problem::MembranePatch:
      return c.program.kind == ProgramKind::CreepTraction ? "lambda2" : "sigma22";
  }
  return "sigma22";
}

}  // namespace

RunResult run_case(const ScenarioConfig& c) { return is_point_problem(c.problem) ? run_point(c) : run_fe(c); }

RunResult point_drive(const ScenarioConfig& c) {
  if (!is_point_problem(c.problem))
    throw Error(ErrorKind::SchemaError, std::string("problem: ") + to_string(c.problem) + " is not a point-driver problem");
  return run_point(c);
}

RunResult convergence_study(const ScenarioConfig& c) {
  RunResult out;
  const double mesh_dt = c.study.mesh_dt > 0.0 ? c.study.mesh_dt : c.dt;
  auto add = [&](const Study& s) {
    out.tables.push_back(study_table(s));
    out.summary[s.name] = study_summary(s);
  };
  switch (c.problem) {
    case Problem::Balloon: {
      const BalloonParams p = balloon_params(c);
      add(balloon_time_study(p, c.study.dt.empty() ? std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4} : c.study.dt));
      if (!c.study.meshes.empty()) {
        std::vector<int> ms;
        for (const auto& [mx, my] : c.study.meshes) {
          if (mx != my) throw Error(ErrorKind::SchemaError, "study.meshes: balloon patches are square, use [m, m]");
          ms.push_back(mx);
        }
        add(balloon_mesh_study(p, ms, mesh_dt));
      }
      break;
    }
    case Problem::Sphere:
      add(sphere_time_study(sphere_params(c), c.study.dt.empty() ? std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4} : c.study.dt));
      break;
    case Problem::PureBend: {
      const PureBendCase b = bend_case(c);
      if (!c.study.dt.empty()) add(pure_bend_time_study(b, c.study.dt));
      if (!c.study.meshes.empty()) add(pure_bend_mesh_study(b, c.study.meshes, mesh_dt, c.study.extrapolate));
      if (out.tables.empty()) throw Error(ErrorKind::SchemaError, "study: give dt and/or meshes");
      break;
    }
    default:
      throw Error(ErrorKind::UnsupportedStudy,
                  std::string("no closed-form solution is available for problem ") + to_string(c.problem));
  }
  return out;
}

RunResult parameter_sweep(const ScenarioConfig& c) {
  RunResult out;
  const std::vector<double> etas = c.sweep.eta;
  if (c.problem == Problem::Point && c.program.kind == ProgramKind::Cyclic && !c.sweep.omega.empty()) {
    Table t;
    t.name = "sweep";
    t.header = {"omega"};
    std::vector<std::vector<SweepPoint>> cols;
    if (etas.empty()) {
      t.header.push_back("dissipation");
      cols.push_back(frequency_sweep(c.program, c.sweep.omega, c.material, c.sweep.cycles, c.sweep.steps_per_cycle,
                                     c.threads));
    }
    for (double eta : etas) {
      t.header.push_back("dissipation[eta=" + label(eta) + "]");
      cols.push_back(frequency_sweep(c.program, c.sweep.omega, with_viscosity(c, eta).material, c.sweep.cycles,
                                     c.sweep.steps_per_cycle, c.threads));
    }
    json peaks = json::array();
    for (std::size_t i = 0; i < c.sweep.omega.size(); ++i) {
      std::vector<double> row{c.sweep.omega[i]};
      for (const auto& col : cols) row.push_back(col[i].dissipation);
      t.rows.push_back(row);
    }
    for (const auto& col : cols) {
      std::size_t k = 0;
      for (std::size_t i = 1; i < col.size(); ++i)
        if (col[i].dissipation > col[k].dissipation) k = i;
      peaks.push_back(col[k].omega);
    }
    out.summary["peak_omega"] = peaks;
    out.tables.push_back(std::move(t));
    return out;
  }
  if (!c.sweep.omega.empty())
    throw Error(ErrorKind::UnsupportedStudy, "frequency sweeps need a point problem with a Cyclic program");
  if (etas.empty()) throw Error(ErrorKind::SchemaError, "sweep.eta: at least one value is required");

  std::vector<ScenarioConfig> runs;
  std::vector<std::string> names;
  if (c.sweep.elastic) {
    if (c.problem != Problem::Point && c.problem != Problem::MembranePatch && c.problem != Problem::ScordelisLo)
      throw Error(ErrorKind::SchemaError, "sweep.elastic: only problems with an explicit material accept a reference material");
    ScenarioConfig e = c;
    e.material = *c.sweep.elastic;
    runs.push_back(e);
    names.push_back("elastic");
  }
  for (double eta : etas) {
    runs.push_back(with_viscosity(c, eta));
    names.push_back("eta=" + label(eta));
  }
  std::vector<RunResult> results(runs.size());
  parallel_for(runs.size(), c.threads, [&](std::size_t i) {
    runs[i].threads = 1;
    results[i] = run_case(runs[i]);
  });
  const std::string key = main_output(c);
  Table t;
  t.name = "sweep";
  t.header = {"t"};
  for (const auto& n : names) t.header.push_back(key + "[" + n + "]");
  const auto time = results[0].table("series").values("t");
  std::vector<std::vector<double>> cols;
  for (const auto& r : results) cols.push_back(r.table("series").values(key));
  for (std::size_t k = 0; k < time.size(); ++k) {
    std::vector<double> row{time[k]};
    for (const auto& col : cols) row.push_back(col[k]);
    t.rows.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < names.size(); ++i) out.summary[names[i]] = results[i].summary;
  out.tables.push_back(std::move(t));
  return out;
}

void write_result(const std::string& dir, const ScenarioConfig& c, const RunResult& r) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create output directory '" + dir + "': " + ec.message());
  auto open = [&](const std::string& name) {
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream os(path);
    if (!os) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
    return os;
  };
  for (const auto& t : r.tables) {
    auto os = open(t.name + ".csv");
    t.write_csv(os);
  }
  open("summary.json") << r.summary.dump(2) << '\n';
  open("config.json") << to_json(c).dump(2) << '\n';
}

}  // namespace kls
