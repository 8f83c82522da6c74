// SPDX-License-Identifier: MIT
// Scenario configuration files (JSON): schema validation with field paths,
// defaults, and a serializer that round-trips through the parser.
#pragma once

#include "kls/material.hpp"
#include "kls/point_driver.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kls {

enum class Problem { Point, Balloon, Sphere, MembranePatch, PureBend, ScordelisLo };

const char* to_string(Problem p);
Problem problem_from_string(const std::string& name);
bool is_point_problem(Problem p);

struct StudySpec {
  std::vector<double> dt;                      // time-step study
  std::vector<std::pair<int, int>> meshes;     // mesh study; square patches use mx = my
  double mesh_dt = 0.0;                        // Δt of the mesh study, 0 = time.dt
  bool extrapolate = true;                     // Richardson extrapolation in time for the pure-bending mesh study
};

struct SweepSpec {
  std::vector<double> omega;  // cyclic frequencies; empty for time-series sweeps
  std::vector<double> eta;    // applied to η_s and η_b of every branch
  int cycles = 10, steps_per_cycle = 1000;
  std::optional<MaterialSpec> elastic;  // optional reference material run alongside
};

struct ScenarioConfig {
  std::string name;
  Problem problem = Problem::Point;
  std::map<std::string, double> parameters;  // problem-specific scalars, completed with defaults
  MaterialSpec material;                     // Point, MembranePatch and ScordelisLo
  KinematicProgram program;                  // Point and MembranePatch
  int mx = 2, my = 2;                        // FE problems
  double dt = 0.01, t_end = 1.0;
  int threads = 1;
  StudySpec study;
  SweepSpec sweep;

  double param(const std::string& key) const { return parameters.at(key); }
};

// Throws Error(SchemaError) with the path of the offending field.
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::string& path);
nlohmann::json to_json(const ScenarioConfig& c);

nlohmann::json material_to_json(const MaterialSpec& m);
MaterialSpec material_from_json(const nlohmann::json& j, const std::string& path = "material");

// Accepted parameter names and their defaults for a problem.
const std::map<std::string, double>& parameter_defaults(Problem p);

}  // namespace kls
