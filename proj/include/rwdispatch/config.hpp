#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "rwdispatch/engine.hpp"
#include "rwdispatch/market.hpp"
#include "rwdispatch/uncertainty.hpp"

namespace rwd::config {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct SamplingConfig {
  double error_fraction = 0.1;
  int requirement_samples = 1000;
  int mc_trials = 1000;
  std::uint64_t master_seed = 0;
  double bin_width = 0.5;
};

struct ModeConfig {
  engine::DispatchMode mode;
  std::vector<double> initial_dispatch;  // per generator, MW
};

struct RunConfig {
  market::SystemSpec system;
  uncertainty::ForecastSeries forecasts;
  std::vector<ModeConfig> modes;
  SamplingConfig sampling;
  std::string output_dir = "out";

  const ModeConfig& find_mode(const std::string& name) const;
  void validate() const;
};

/// Parses and validates a config file. Unknown keys are rejected with a
/// path-anchored message.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& json_text);
std::string serialize_config(const RunConfig& cfg);

/// Numbers rendered with up to 6 fractional digits, trailing zeros trimmed;
/// '.' decimal separator, LF line endings.
std::string format_number(double v);

}  // namespace rwd::config
