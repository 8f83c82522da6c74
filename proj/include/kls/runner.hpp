// SPDX-License-Identifier: MIT
// Executes scenario configurations: time-series runs, point-driver runs,
// convergence studies and parameter sweeps, with CSV and JSON outputs.
#pragma once

#include "kls/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace kls {

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // throws if absent
  std::vector<double> values(const std::string& name) const;
  // One header row, then one line per row with 17 significant digits.
  void write_csv(std::ostream& os) const;
};

struct RunResult {
  std::vector<Table> tables;
  nlohmann::json summary;

  const Table& table(const std::string& name) const;
};

// FE problems are solved with the global Newton solver; point problems with the
// material-point driver. Every time series starts with the t = 0 state.
RunResult run_case(const ScenarioConfig& c);
// Point-driver problems only.
RunResult point_drive(const ScenarioConfig& c);
// Problems with closed-form solutions (balloon, sphere, pure_bend); others
// raise UnsupportedStudy.
RunResult convergence_study(const ScenarioConfig& c);
// Cyclic point programs with sweep.omega produce a dissipation-frequency table;
// otherwise sweep.eta values replace every branch viscosity and the main
// output of each run becomes one column of a time-series table.
RunResult parameter_sweep(const ScenarioConfig& c);

// Writes <name>.csv for every table plus summary.json and the resolved config.json.
void write_result(const std::string& dir, const ScenarioConfig& c, const RunResult& r);

// Process exit status for an error category: 2 schema, 3 parameters,
// 4 numerical failure, 5 unsupported study, 6 input/output.
int exit_code(ErrorKind kind);

}  // namespace kls
