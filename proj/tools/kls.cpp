// SPDX-License-Identifier: MIT
#include "kls/runner.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Options {
  std::string config, out;
  std::optional<double> dt, t_end;
  std::optional<int> threads;
};

kls::ScenarioConfig resolve(const Options& o) {
  kls::ScenarioConfig c = kls::load_config(o.config);
  if (o.dt) c.dt = *o.dt;
  if (o.t_end) c.t_end = *o.t_end;
  if (o.threads) c.threads = *o.threads;
  // Re-validate so that command-line overrides obey the same schema.
  return kls::parse_config(kls::to_json(c));
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "scenario configuration (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output directory (default out/<name>)");
  cmd->add_option("--dt", o.dt, "override the time step");
  cmd->add_option("--tend", o.t_end, "override the end time");
  cmd->add_option("--threads", o.threads, "worker threads for assembly and sweeps");
}

void report(const kls::RunResult& r) {
  for (const auto& t : r.tables) std::cout << t.name << ": " << t.rows.size() << " rows\n";
  std::cout << r.summary.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Viscoelastic Kirchhoff-Love shell simulations"};
  app.require_subcommand(1);
  Options o;
  CLI::App* run = app.add_subcommand("run", "run a scenario and write its time series");
  CLI::App* converge = app.add_subcommand("converge", "convergence study against the closed-form solution");
  CLI::App* point = app.add_subcommand("point", "run a material-point program");
  CLI::App* sweep = app.add_subcommand("sweep", "frequency or viscosity sweep");
  for (CLI::App* cmd : {run, converge, point, sweep}) add_common(cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const kls::ScenarioConfig c = resolve(o);
    const std::string out = o.out.empty() ? "out/" + c.name : o.out;
    const auto t0 = std::chrono::steady_clock::now();
    kls::RunResult r;
    if (run->parsed())
      r = kls::run_case(c);
    else if (converge->parsed())
      r = kls::convergence_study(c);
    else if (point->parsed())
      r = kls::point_drive(c);
    else
      r = kls::parameter_sweep(c);
    kls::write_result(out, c, r);
    report(r);
    std::cout << "wrote " << out << " in "
              << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
    return 0;
  } catch (const kls::Error& e) {
    std::cerr << "error [" << kls::to_string(e.kind()) << "]: " << e.what() << '\n';
    return kls::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
