#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rwdispatch/commands.hpp"
#include "rwdispatch/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Rolling-window energy + flexible-ramping dispatch simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  rwd::commands::Overrides ov;
  std::uint64_t seed = 0;
  int trials = 0;
  std::string out;
  app.add_option("--config", config_path, "run configuration (JSON)")
      ->required();
  auto* seed_opt = app.add_option("--seed", seed, "override master seed");
  auto* trials_opt = app.add_option("--trials", trials, "override trial count");
  auto* out_opt = app.add_option("--out", out, "override output directory");

  auto* c_req = app.add_subcommand(
      "requirements", "compute FRP requirements and histograms per mode");
  std::string mode_name;
  auto* c_run = app.add_subcommand(
      "run", "solve one deterministic trajectory for a mode");
  c_run->add_option("--mode", mode_name, "mode name from the config")
      ->required();
  auto* c_mc =
      app.add_subcommand("mc", "Monte Carlo summary across all modes");
  auto* c_report =
      app.add_subcommand("report", "two-interval totals comparison");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*seed_opt) ov.seed = seed;
  if (*trials_opt) ov.trials = trials;
  if (*out_opt) ov.out_dir = out;

  rwd::config::RunConfig cfg;
  try {
    cfg = rwd::config::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*c_req) return rwd::commands::cmd_requirements(cfg, ov);
    if (*c_run) {
      try {
        cfg.find_mode(mode_name);
      } catch (const rwd::config::ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
      }
      return rwd::commands::cmd_run(cfg, mode_name, ov);
    }
    if (*c_mc) return rwd::commands::cmd_mc(cfg, ov);
    if (*c_report) return rwd::commands::cmd_report(cfg, ov);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
