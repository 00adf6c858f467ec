#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "rwdispatch/commands.hpp"
#include "rwdispatch/config.hpp"

using namespace rwd;
namespace fs = std::filesystem;

namespace {

std::string study_json() {
  // mirrors configs/case_study.json but trimmed for fast tests
  return R"({
    "system": {
      "interval_hours": 0.08333333333333333,
      "window_length": 2,
      "generators": [
        {"id": "G1", "energy_cost": 20, "p_min": 0, "p_max": 100,
         "ramp_down": 15, "ramp_up": 15, "emission_factor": 0.214},
        {"id": "G2", "energy_cost": 50, "p_min": 0, "p_max": 500,
         "ramp_down": 50, "ramp_up": 50, "emission_factor": 0.428}
      ],
      "loads": [{"id": "L1", "shed_penalty": 200}],
      "ver_units": [{"id": "W1", "kind": "wind"}, {"id": "S1", "kind": "solar"}]
    },
    "forecasts": [
      {"origin": 0, "load": [[100], [85]], "ver": [[20, 20], [20, 20]]},
      {"origin": 1, "load": [[85], [85]], "ver": [[20, 20], [20, 20]]}
    ],
    "modes": [
      {"name": "FBD", "kind": "fbd", "initial_dispatch": [60, 0]},
      {"name": "Cap-1", "kind": "rfbd", "cap_per_unit": 1,
       "initial_dispatch": [62, 0]}
    ],
    "sampling": {"error_fraction": 0.1, "requirement_samples": 200,
                 "mc_trials": 25, "master_seed": 11, "bin_width": 0.5},
    "output_dir": "out"
  })";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("config round-trips through serialization") {
  const auto cfg = config::parse_config(study_json());
  CHECK(cfg.system.generators[1].p_max == 500.0);
  CHECK(cfg.modes[1].mode.caps.uniform == 1.0);
  CHECK(cfg.forecasts.by_origin.at(1).load[0][0] == 85.0);

  const auto cfg2 = config::parse_config(config::serialize_config(cfg));
  CHECK(config::serialize_config(cfg2) == config::serialize_config(cfg));
}

TEST_CASE("unknown keys and bad values are rejected with a path") {
  auto bad = study_json();
  bad.replace(bad.find("\"interval_hours\""), 16, "\"interval_hourz\"");
  try {
    config::parse_config(bad);
    FAIL("expected ConfigError");
  } catch (const config::ConfigError& e) {
    CHECK(std::string(e.what()).find("$.system") != std::string::npos);
    CHECK(std::string(e.what()).find("interval_hourz") != std::string::npos);
  }

  auto wrong = study_json();
  wrong.replace(wrong.find("\"fbd\""), 5, "\"xyz\"");
  CHECK_THROWS_AS(config::parse_config(wrong), config::ConfigError);

  CHECK_THROWS_AS(config::parse_config("{"), config::ConfigError);
  CHECK_THROWS_AS(config::parse_config("{}"), config::ConfigError);
}

TEST_CASE("number formatting for csv output") {
  CHECK(config::format_number(114.37575) == "114.37575");
  CHECK(config::format_number(100.0) == "100");
  CHECK(config::format_number(-0.0000001) == "0");
  CHECK(config::format_number(0.5) == "0.5");
  CHECK(config::format_number(5.6451) == "5.6451");
}

TEST_CASE("command outputs are deterministic byte-for-byte") {
  const auto cfg = config::parse_config(study_json());
  const fs::path dir1 = fs::temp_directory_path() / "rwd_csv_a";
  const fs::path dir2 = fs::temp_directory_path() / "rwd_csv_b";
  fs::remove_all(dir1);
  fs::remove_all(dir2);
  commands::Overrides a, b;
  a.out_dir = dir1.string();
  b.out_dir = dir2.string();
  CHECK(commands::cmd_requirements(cfg, a) == 0);
  CHECK(commands::cmd_requirements(cfg, b) == 0);
  CHECK(commands::cmd_mc(cfg, a) == 0);
  CHECK(commands::cmd_mc(cfg, b) == 0);
  CHECK(commands::cmd_run(cfg, "FBD", a) == 0);
  CHECK(commands::cmd_run(cfg, "FBD", b) == 0);
  for (const char* name :
       {"frp_requirements.csv", "histogram_FBD.csv", "mc_summary.csv",
        "totals.csv", "binding_dispatch.csv"}) {
    const auto text = slurp(dir1 / name);
    CHECK(text == slurp(dir2 / name));
    CHECK(!text.empty());
    CHECK(text.find('\r') == std::string::npos);  // LF endings
  }
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}
