// Command-line front end: run, sweep, validate, plot.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "stenoflow/stenoflow.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kDiverged = 2, kValidationFailed = 3 };

stenoflow::RunConfig load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw stenoflow::ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return stenoflow::parse_config(ss.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulsatile magneto-micropolar flow and heat transfer in a stenosed tube"};
  app.require_subcommand(1);

  std::string config_path, out_dir, in_dir;
  auto* run_cmd = app.add_subcommand("run", "Simulate one configuration");
  run_cmd->add_option("--config", config_path, "key = value configuration file")->required();
  run_cmd->add_option("--out", out_dir, "output directory")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "Simulate every point of the sweep.<key> lists");
  sweep_cmd->add_option("--config", config_path, "key = value configuration file")->required();
  sweep_cmd->add_option("--out", out_dir, "output directory")->required();

  auto* validate_cmd = app.add_subcommand("validate", "Run analytic oracles and invariant checks");

  auto* plot_cmd = app.add_subcommand("plot", "Write gnuplot data and scripts for a run or sweep");
  plot_cmd->add_option("--in", in_dir, "run or sweep output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (*run_cmd) {
      auto cfg = load(config_path);
      cfg.out_dir = out_dir;
      if (!cfg.sweep.empty())
        throw stenoflow::ConfigError("configuration has sweep.* keys; use the sweep subcommand");
      const auto r = stenoflow::run(cfg, out_dir);
      std::cout << "wrote " << out_dir << " (" << r.steps << " steps, periodicity defect "
                << r.periodicity_defect() << ")\n";
      return kOk;
    }
    if (*sweep_cmd) {
      auto cfg = load(config_path);
      cfg.out_dir = out_dir;
      const auto points = stenoflow::sweep(cfg, out_dir);
      bool diverged = false;
      for (const auto& p : points) {
        std::cout << "point " << p.index << ": " << (p.ok ? "ok" : p.message) << "\n";
        diverged = diverged || p.diverged;
      }
      return diverged ? kDiverged : kOk;
    }
    if (*validate_cmd) {
      const auto rep = stenoflow::run_validation(&std::cout);
      std::cout << (rep.passed() ? "all checks passed\n" : "validation FAILED\n");
      return rep.passed() ? kOk : kValidationFailed;
    }
    if (*plot_cmd) {
      const auto scripts = stenoflow::emit_plots(in_dir);
      std::cout << "wrote " << scripts.size() << " plot scripts to " << in_dir << "/plots\n";
      return kOk;
    }
  } catch (const stenoflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const stenoflow::DivergenceError& e) {
    std::cerr << "solver diverged: " << e.what() << "\n";
    return kDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}
