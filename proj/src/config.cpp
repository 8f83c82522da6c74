// SPDX-License-Identifier: MIT
#include "kls/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace kls {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::SchemaError, path + ": " + what);
}

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void expect_object(const json& j, const std::string& path, const std::set<std::string>& keys) {
  if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) fail(at(path, k), "unknown key");
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

double number_or(const json& j, const std::string& key, const std::string& path, double fallback) {
  return j.contains(key) ? number(j.at(key), at(path, key)) : fallback;
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], at(path, i)));
  return out;
}

template <class F>
auto enum_value(const json& j, const std::string& path, F parse) {
  const std::string s = string(j, path);
  try {
    return parse(s);
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

Schedule schedule(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of [t, value] pairs");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto v = numbers(j[i], at(path, i));
    if (v.size() != 2) fail(at(path, i), "expected [t, value]");
    pts.emplace_back(v[0], v[1]);
  }
  try {
    return Schedule(pts);
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

json schedule_json(const Schedule& s) {
  json a = json::array();
  for (const auto& [t, v] : s.points()) a.push_back({t, v});
  return a;
}

void nonnegative(double v, const std::string& path) {
  if (v < 0.0) fail(path, "must be nonnegative");
}

ElasticModel elastic_from_json(const json& j, const std::string& path) {
  expect_object(j, path, {"model", "K", "mu", "gamma", "c", "k", "H0"});
  if (!j.contains("model")) fail(at(path, "model"), "required");
  ElasticModel m;
  m.kind = enum_value(j.at("model"), at(path, "model"), model_kind_from_string);
  m.K = number_or(j, "K", path, 0.0);
  m.mu = number_or(j, "mu", path, 0.0);
  m.gamma = number_or(j, "gamma", path, 0.0);
  m.c = number_or(j, "c", path, 0.0);
  m.k = number_or(j, "k", path, 0.0);
  m.H0 = number_or(j, "H0", path, 0.0);
  return m;
}

MaxwellBranch branch_from_json(const json& j, const std::string& path) {
  expect_object(j, path, {"membrane", "K1", "mu1", "gamma1", "bending", "c1", "eta_s", "eta_b"});
  MaxwellBranch b;
  if (j.contains("membrane")) b.membrane = enum_value(j.at("membrane"), at(path, "membrane"), branch_membrane_from_string);
  b.K1 = number_or(j, "K1", path, 0.0);
  b.mu1 = number_or(j, "mu1", path, 0.0);
  b.gamma1 = number_or(j, "gamma1", path, 0.0);
  if (j.contains("bending")) {
    if (!j.at("bending").is_boolean()) fail(at(path, "bending"), "expected true or false");
    b.bending = j.at("bending").get<bool>();
  }
  b.c1 = number_or(j, "c1", path, 0.0);
  b.eta_s = number_or(j, "eta_s", path, 0.0);
  b.eta_b = number_or(j, "eta_b", path, 0.0);
  nonnegative(b.eta_s, at(path, "eta_s"));
  nonnegative(b.eta_b, at(path, "eta_b"));
  return b;
}

KinematicProgram program_from_json(const json& j, const std::string& path) {
  expect_object(j, path, {"kind", "L0", "displacement", "traction", "amplitude", "omega", "R", "lambda_end", "t_ref"});
  if (!j.contains("kind")) fail(at(path, "kind"), "required");
  KinematicProgram p;
  p.kind = enum_value(j.at("kind"), at(path, "kind"), program_kind_from_string);
  p.L0 = number_or(j, "L0", path, p.L0);
  if (j.contains("displacement")) p.displacement = schedule(j.at("displacement"), at(path, "displacement"));
  if (j.contains("traction")) p.traction = schedule(j.at("traction"), at(path, "traction"));
  p.amplitude = number_or(j, "amplitude", path, p.amplitude);
  p.omega = number_or(j, "omega", path, p.omega);
  p.R = number_or(j, "R", path, p.R);
  p.lambda_end = number_or(j, "lambda_end", path, p.lambda_end);
  p.t_ref = number_or(j, "t_ref", path, p.t_ref);
  if ((p.kind == ProgramKind::PureShear || p.kind == ProgramKind::PureDilatation) && p.displacement.empty())
    fail(at(path, "displacement"), "required for " + std::string(to_string(p.kind)));
  if (p.kind == ProgramKind::CreepTraction && p.traction.empty()) fail(at(path, "traction"), "required for CreepTraction");
  try {
    p.validate();
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return p;
}

json program_json(const KinematicProgram& p) {
  return {{"kind", to_string(p.kind)},   {"L0", p.L0},
          {"displacement", schedule_json(p.displacement)}, {"traction", schedule_json(p.traction)},
          {"amplitude", p.amplitude},    {"omega", p.omega},
          {"R", p.R},                    {"lambda_end", p.lambda_end},
          {"t_ref", p.t_ref}};
}

std::pair<int, int> mesh_pair(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [mx, my]");
  const int mx = integer(j[0], at(path, 0)), my = integer(j[1], at(path, 1));
  if (mx < 1 || my < 1) fail(path, "element counts must be positive");
  return {mx, my};
}

}  // namespace

const char* to_string(Problem p) {
  switch (p) {
    case Problem::Point: return "point";
    case Problem::Balloon: return "balloon";
    case Problem::Sphere: return "sphere";
    case Problem::MembranePatch: return "membrane_patch";
    case Problem::PureBend: return "pure_bend";
    case Problem::ScordelisLo: return "scordelis_lo";
  }
  return "unknown";
}

Problem problem_from_string(const std::string& name) {
  for (Problem p : {Problem::Point, Problem::Balloon, Problem::Sphere, Problem::MembranePatch, Problem::PureBend,
                    Problem::ScordelisLo})
    if (name == to_string(p)) return p;
  throw Error(ErrorKind::SchemaError, "unknown problem '" + name + "'");
}

bool is_point_problem(Problem p) { return p == Problem::Point || p == Problem::Balloon || p == Problem::Sphere; }

const std::map<std::string, double>& parameter_defaults(Problem p) {
  static const std::map<std::string, double> none;
  static const std::map<std::string, double> balloon{{"R", 1.0},      {"mu", 1.0},         {"mu1", 1.0},
                                                     {"eta_s", 0.1}, {"lambda_end", 2.0}, {"t_end", 1.0}};
  static const std::map<std::string, double> sphere{
      {"R", 1.0}, {"mu", 5.0},    {"mu1", 5.0},   {"c1", 1.0},                        {"k", 1.0},
      {"H0", 1.0}, {"eta_s", 0.5}, {"eta_b", 0.5}, {"lambda_end", std::cbrt(4.0)}, {"t_end", 1.0}};
  static const std::map<std::string, double> bend{{"L", 1.0}, {"S", M_PI},     {"mu", 10.0},       {"K", 5.0},
                                                  {"c", 1.0}, {"c1", 1.0},     {"eta_b", 0.5},     {"kappa_end", 0.5},
                                                  {"t_end", 1.0}};
  static const std::map<std::string, double> roof{
      {"R", 25.0}, {"L", 50.0}, {"half_angle_deg", 40.0}, {"f0", 1.0}, {"t0", 10.0}};
  switch (p) {
    case Problem::Balloon: return balloon;
    case Problem::Sphere: return sphere;
    case Problem::PureBend: return bend;
    case Problem::ScordelisLo: return roof;
    default: return none;
  }
}

MaterialSpec material_from_json(const json& j, const std::string& path) {
  expect_object(j, path, {"elastic", "branches"});
  MaterialSpec m;
  if (j.contains("elastic")) {
    const json& e = j.at("elastic");
    if (!e.is_array()) fail(at(path, "elastic"), "expected an array");
    for (std::size_t i = 0; i < e.size(); ++i) m.elastic.push_back(elastic_from_json(e[i], at(at(path, "elastic"), i)));
  }
  if (j.contains("branches")) {
    const json& b = j.at("branches");
    if (!b.is_array()) fail(at(path, "branches"), "expected an array");
    for (std::size_t i = 0; i < b.size(); ++i)
      m.branches.push_back(branch_from_json(b[i], at(at(path, "branches"), i)));
  }
  if (m.elastic.empty()) fail(at(path, "elastic"), "at least one elastic model is required");
  return m;
}

json material_to_json(const MaterialSpec& m) {
  json e = json::array(), b = json::array();
  for (const auto& x : m.elastic)
    e.push_back({{"model", to_string(x.kind)}, {"K", x.K}, {"mu", x.mu}, {"gamma", x.gamma}, {"c", x.c}, {"k", x.k},
                 {"H0", x.H0}});
  for (const auto& x : m.branches)
    b.push_back({{"membrane", to_string(x.membrane)}, {"K1", x.K1}, {"mu1", x.mu1}, {"gamma1", x.gamma1},
                 {"bending", x.bending}, {"c1", x.c1}, {"eta_s", x.eta_s}, {"eta_b", x.eta_b}});
  return {{"elastic", e}, {"branches", b}};
}

ScenarioConfig parse_config(const json& j) {
  expect_object(j, "", {"name", "problem", "parameters", "material", "program", "mesh", "time", "threads", "study", "sweep"});
  ScenarioConfig c;
  if (!j.contains("problem")) fail("problem", "required");
  c.problem = enum_value(j.at("problem"), "problem", problem_from_string);
  c.name = j.contains("name") ? string(j.at("name"), "name") : std::string(to_string(c.problem));

  c.parameters = parameter_defaults(c.problem);
  if (j.contains("parameters")) {
    const json& p = j.at("parameters");
    if (!p.is_object()) fail("parameters", "expected an object");
    for (const auto& [k, v] : p.items()) {
      if (!c.parameters.count(k)) fail(at("parameters", k), "unknown parameter for problem " + std::string(to_string(c.problem)));
      c.parameters[k] = number(v, at("parameters", k));
    }
  }

  const bool needs_material =
      c.problem == Problem::Point || c.problem == Problem::MembranePatch || c.problem == Problem::ScordelisLo;
  const bool needs_program = c.problem == Problem::Point || c.problem == Problem::MembranePatch;
  if (needs_material) {
    if (!j.contains("material")) fail("material", "required for problem " + std::string(to_string(c.problem)));
    c.material = material_from_json(j.at("material"), "material");
  } else if (j.contains("material")) {
    fail("material", "not used by problem " + std::string(to_string(c.problem)) + "; set its parameters instead");
  }
  if (needs_program) {
    if (!j.contains("program")) fail("program", "required for problem " + std::string(to_string(c.problem)));
    c.program = program_from_json(j.at("program"), "program");
  } else if (j.contains("program")) {
    fail("program", "not used by problem " + std::string(to_string(c.problem)));
  }

  if (j.contains("mesh")) std::tie(c.mx, c.my) = mesh_pair(j.at("mesh"), "mesh");

  if (!j.contains("time")) fail("time", "required");
  const json& t = j.at("time");
  expect_object(t, "time", {"dt", "t_end"});
  if (!t.contains("dt")) fail("time.dt", "required");
  if (!t.contains("t_end")) fail("time.t_end", "required");
  c.dt = number(t.at("dt"), "time.dt");
  c.t_end = number(t.at("t_end"), "time.t_end");
  if (!(c.dt > 0.0)) fail("time.dt", "must be positive");
  if (!(c.t_end > 0.0)) fail("time.t_end", "must be positive");

  if (j.contains("threads")) {
    c.threads = integer(j.at("threads"), "threads");
    if (c.threads < 1) fail("threads", "must be at least 1");
  }

  if (j.contains("study")) {
    const json& s = j.at("study");
    expect_object(s, "study", {"dt", "meshes", "mesh_dt", "extrapolate"});
    if (s.contains("dt")) c.study.dt = numbers(s.at("dt"), "study.dt");
    for (std::size_t i = 0; i < c.study.dt.size(); ++i)
      if (!(c.study.dt[i] > 0.0)) fail(at("study.dt", i), "must be positive");
    if (s.contains("meshes")) {
      const json& m = s.at("meshes");
      if (!m.is_array()) fail("study.meshes", "expected an array");
      for (std::size_t i = 0; i < m.size(); ++i) c.study.meshes.push_back(mesh_pair(m[i], at("study.meshes", i)));
    }
    c.study.mesh_dt = number_or(s, "mesh_dt", "study", 0.0);
    nonnegative(c.study.mesh_dt, "study.mesh_dt");
    if (s.contains("extrapolate")) {
      if (!s.at("extrapolate").is_boolean()) fail("study.extrapolate", "expected true or false");
      c.study.extrapolate = s.at("extrapolate").get<bool>();
    }
  }

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    expect_object(s, "sweep", {"omega", "eta", "cycles", "steps_per_cycle", "elastic"});
    if (s.contains("omega")) c.sweep.omega = numbers(s.at("omega"), "sweep.omega");
    for (std::size_t i = 0; i < c.sweep.omega.size(); ++i)
      if (!(c.sweep.omega[i] > 0.0)) fail(at("sweep.omega", i), "must be positive");
    if (s.contains("eta")) c.sweep.eta = numbers(s.at("eta"), "sweep.eta");
    for (std::size_t i = 0; i < c.sweep.eta.size(); ++i) nonnegative(c.sweep.eta[i], at("sweep.eta", i));
    if (s.contains("cycles")) c.sweep.cycles = integer(s.at("cycles"), "sweep.cycles");
    if (s.contains("steps_per_cycle")) c.sweep.steps_per_cycle = integer(s.at("steps_per_cycle"), "sweep.steps_per_cycle");
    if (c.sweep.cycles < 1) fail("sweep.cycles", "must be at least 1");
    if (c.sweep.steps_per_cycle < 1) fail("sweep.steps_per_cycle", "must be at least 1");
    if (s.contains("elastic")) c.sweep.elastic = material_from_json(s.at("elastic"), "sweep.elastic");
  }
  return c;
}

json to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["problem"] = to_string(c.problem);
  json params = json::object();
  for (const auto& [k, v] : c.parameters) params[k] = v;
  j["parameters"] = params;
  if (c.problem == Problem::Point || c.problem == Problem::MembranePatch || c.problem == Problem::ScordelisLo)
    j["material"] = material_to_json(c.material);
  if (c.problem == Problem::Point || c.problem == Problem::MembranePatch) j["program"] = program_json(c.program);
  j["mesh"] = {c.mx, c.my};
  j["time"] = {{"dt", c.dt}, {"t_end", c.t_end}};
  j["threads"] = c.threads;
  json meshes = json::array();
  for (const auto& [mx, my] : c.study.meshes) meshes.push_back({mx, my});
  j["study"] = {{"dt", c.study.dt}, {"meshes", meshes}, {"mesh_dt", c.study.mesh_dt}, {"extrapolate", c.study.extrapolate}};
  json sweep = {{"omega", c.sweep.omega},
                {"eta", c.sweep.eta},
                {"cycles", c.sweep.cycles},
                {"steps_per_cycle", c.sweep.steps_per_cycle}};
  if (c.sweep.elastic) sweep["elastic"] = material_to_json(*c.sweep.elastic);
  j["sweep"] = sweep;
  return j;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, path + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace kls
