#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "rwdispatch/config.hpp"

namespace rwd::commands {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> out_dir;
};

/// Writes frp_requirements.csv and histogram_<mode>.csv per mode.
int cmd_requirements(const config::RunConfig& cfg, const Overrides& ov = {});

/// Writes binding_dispatch.csv for a single trajectory of one mode
/// (realization = forecast unless a trial seed is given).
int cmd_run(const config::RunConfig& cfg, const std::string& mode_name,
            const Overrides& ov = {});

/// Writes mc_summary.csv and totals.csv across all configured modes.
int cmd_mc(const config::RunConfig& cfg, const Overrides& ov = {});

/// Writes totals.csv only (the two-interval comparison).
int cmd_report(const config::RunConfig& cfg, const Overrides& ov = {});

}  // namespace rwd::commands
