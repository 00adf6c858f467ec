#include "rwdispatch/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rwd::config {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::string& path,
                  const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
  if (!obj.is_object())
    throw ConfigError(path + ": expected an object");
  for (const auto& [key, val] : obj.items()) {
    (void)val;
    if (!allowed.count(key))
      throw ConfigError(path + ": unknown key '" + key + "'");
  }
  for (const auto& key : required)
    if (!obj.contains(key))
      throw ConfigError(path + ": missing key '" + key + "'");
}

double get_num(const json& obj, const std::string& path, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number())
    throw ConfigError(path + "." + key + ": expected a number");
  return v.get<double>();
}

market::GeneratorSpec parse_generator(const json& j, const std::string& path) {
  require_keys(j, path,
               {"id", "energy_cost", "p_min", "p_max", "ramp_down", "ramp_up",
                "emission_factor"},
               {"id", "energy_cost", "p_min", "p_max", "ramp_down", "ramp_up",
                "emission_factor"});
  market::GeneratorSpec g;
  g.id = j.at("id").get<std::string>();
  g.energy_cost = get_num(j, path, "energy_cost");
  g.p_min = get_num(j, path, "p_min");
  g.p_max = get_num(j, path, "p_max");
  g.ramp_down_mag = get_num(j, path, "ramp_down");
  g.ramp_up_mag = get_num(j, path, "ramp_up");
  g.emission_factor = get_num(j, path, "emission_factor");
  return g;
}

std::vector<std::vector<double>> parse_matrix(const json& j,
                                              const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array");
  std::vector<std::vector<double>> out;
  for (const auto& row : j) {
    if (!row.is_array())
      throw ConfigError(path + ": expected an array of arrays");
    out.push_back(row.get<std::vector<double>>());
  }
  return out;
}

}  // namespace

const ModeConfig& RunConfig::find_mode(const std::string& name) const {
  for (const auto& m : modes)
    if (m.mode.name == name) return m;
  throw ConfigError("unknown mode '" + name + "'");
}

void RunConfig::validate() const {
  system.validate();
  forecasts.validate();
  for (const auto& [origin, wf] : forecasts.by_origin) {
    for (const auto& per_unit : wf.ver)
      if (per_unit.size() != system.ver_units.size())
        throw ConfigError("forecast at origin " + std::to_string(origin) +
                          ": VER column count != unit count");
    for (const auto& per_load : wf.load)
      if (per_load.size() != system.loads.size())
        throw ConfigError("forecast at origin " + std::to_string(origin) +
                          ": load column count != load count");
  }
  if (modes.empty()) throw ConfigError("at least one mode is required");
  for (const auto& m : modes) {
    m.mode.validate();
    if (m.initial_dispatch.size() != system.generators.size())
      throw ConfigError("mode " + m.mode.name +
                        ": initial_dispatch length != generator count");
  }
  if (sampling.requirement_samples < 1)
    throw ConfigError("sampling.requirement_samples must be >= 1");
  if (sampling.mc_trials < 1)
    throw ConfigError("sampling.mc_trials must be >= 1");
  if (sampling.error_fraction < 0.0)
    throw ConfigError("sampling.error_fraction must be >= 0");
  if (!(sampling.bin_width > 0.0))
    throw ConfigError("sampling.bin_width must be > 0");
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  require_keys(j, "$", {"system", "forecasts", "modes", "sampling", "output_dir"},
               {"system", "forecasts", "modes", "sampling"});

  RunConfig cfg;
  {
    const auto& js = j.at("system");
    require_keys(js, "$.system",
                 {"interval_hours", "window_length", "generators", "loads",
                  "ver_units"},
                 {"interval_hours", "window_length", "generators", "loads",
                  "ver_units"});
    cfg.system.interval_hours = get_num(js, "$.system", "interval_hours");
    cfg.system.window_length = js.at("window_length").get<int>();
    int gi = 0;
    for (const auto& jg : js.at("generators"))
      cfg.system.generators.push_back(parse_generator(
          jg, "$.system.generators[" + std::to_string(gi++) + "]"));
    int li = 0;
    for (const auto& jl : js.at("loads")) {
      const std::string path = "$.system.loads[" + std::to_string(li++) + "]";
      require_keys(jl, path, {"id", "shed_penalty"}, {"id", "shed_penalty"});
      cfg.system.loads.push_back(
          {jl.at("id").get<std::string>(), get_num(jl, path, "shed_penalty")});
    }
    int vi = 0;
    for (const auto& jv : js.at("ver_units")) {
      const std::string path =
          "$.system.ver_units[" + std::to_string(vi++) + "]";
      require_keys(jv, path, {"id", "kind"}, {"id", "kind"});
      market::VerUnit u;
      u.id = jv.at("id").get<std::string>();
      const std::string kind = jv.at("kind").get<std::string>();
      if (kind == "wind")
        u.kind = market::VerUnit::Kind::Wind;
      else if (kind == "solar")
        u.kind = market::VerUnit::Kind::Solar;
      else
        throw ConfigError(path + ".kind: expected 'wind' or 'solar'");
      cfg.system.ver_units.push_back(std::move(u));
    }
  }
  {
    int wi = 0;
    for (const auto& jw : j.at("forecasts")) {
      const std::string path = "$.forecasts[" + std::to_string(wi++) + "]";
      require_keys(jw, path, {"origin", "load", "ver"},
                   {"origin", "load", "ver"});
      const int origin = jw.at("origin").get<int>();
      if (cfg.forecasts.by_origin.count(origin))
        throw ConfigError(path + ": duplicate window origin");
      uncertainty::ForecastSeries::WindowForecast wf;
      wf.load = parse_matrix(jw.at("load"), path + ".load");
      wf.ver = parse_matrix(jw.at("ver"), path + ".ver");
      if (wf.load.size() != wf.ver.size())
        throw ConfigError(path + ": load/ver horizon lengths differ");
      cfg.forecasts.by_origin.emplace(origin, std::move(wf));
    }
  }
  {
    int mi = 0;
    for (const auto& jm : j.at("modes")) {
      const std::string path = "$.modes[" + std::to_string(mi++) + "]";
      require_keys(jm, path,
                   {"name", "kind", "cap_per_unit", "caps",
                    "first_window_binding_cap", "initial_dispatch"},
                   {"name", "kind", "initial_dispatch"});
      ModeConfig mc;
      mc.mode.name = jm.at("name").get<std::string>();
      const std::string kind = jm.at("kind").get<std::string>();
      if (kind == "fbd")
        mc.mode.kind = engine::DispatchMode::Kind::FBD;
      else if (kind == "rfbd")
        mc.mode.kind = engine::DispatchMode::Kind::RFBD;
      else
        throw ConfigError(path + ".kind: expected 'fbd' or 'rfbd'");
      if (jm.contains("cap_per_unit"))
        mc.mode.caps.uniform = get_num(jm, path, "cap_per_unit");
      if (jm.contains("caps"))
        mc.mode.caps.per_unit = jm.at("caps").get<std::vector<double>>();
      if (jm.contains("first_window_binding_cap"))
        mc.mode.first_window_binding_cap =
            jm.at("first_window_binding_cap").get<bool>();
      mc.initial_dispatch = jm.at("initial_dispatch").get<std::vector<double>>();
      cfg.modes.push_back(std::move(mc));
    }
  }
  {
    const auto& jsam = j.at("sampling");
    require_keys(jsam, "$.sampling",
                 {"error_fraction", "requirement_samples", "mc_trials",
                  "master_seed", "bin_width"},
                 {"error_fraction", "requirement_samples", "mc_trials",
                  "master_seed", "bin_width"});
    cfg.sampling.error_fraction = get_num(jsam, "$.sampling", "error_fraction");
    cfg.sampling.requirement_samples =
        jsam.at("requirement_samples").get<int>();
    cfg.sampling.mc_trials = jsam.at("mc_trials").get<int>();
    cfg.sampling.master_seed = jsam.at("master_seed").get<std::uint64_t>();
    cfg.sampling.bin_width = get_num(jsam, "$.sampling", "bin_width");
  }
  if (j.contains("output_dir"))
    cfg.output_dir = j.at("output_dir").get<std::string>();

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  json j;
  json js;
  js["interval_hours"] = cfg.system.interval_hours;
  js["window_length"] = cfg.system.window_length;
  js["generators"] = json::array();
  for (const auto& g : cfg.system.generators)
    js["generators"].push_back({{"id", g.id},
                                {"energy_cost", g.energy_cost},
                                {"p_min", g.p_min},
                                {"p_max", g.p_max},
                                {"ramp_down", g.ramp_down_mag},
                                {"ramp_up", g.ramp_up_mag},
                                {"emission_factor", g.emission_factor}});
  js["loads"] = json::array();
  for (const auto& l : cfg.system.loads)
    js["loads"].push_back({{"id", l.id}, {"shed_penalty", l.shed_penalty}});
  js["ver_units"] = json::array();
  for (const auto& v : cfg.system.ver_units)
    js["ver_units"].push_back(
        {{"id", v.id},
         {"kind", v.kind == market::VerUnit::Kind::Wind ? "wind" : "solar"}});
  j["system"] = std::move(js);

  j["forecasts"] = json::array();
  for (const auto& [origin, wf] : cfg.forecasts.by_origin)
    j["forecasts"].push_back(
        {{"origin", origin}, {"load", wf.load}, {"ver", wf.ver}});

  j["modes"] = json::array();
  for (const auto& m : cfg.modes) {
    json jm = {{"name", m.mode.name},
               {"kind",
                m.mode.kind == engine::DispatchMode::Kind::FBD ? "fbd" : "rfbd"},
               {"initial_dispatch", m.initial_dispatch}};
    if (m.mode.kind == engine::DispatchMode::Kind::RFBD) {
      jm["cap_per_unit"] = m.mode.caps.uniform;
      if (m.mode.caps.per_unit) jm["caps"] = *m.mode.caps.per_unit;
      jm["first_window_binding_cap"] = m.mode.first_window_binding_cap;
    }
    j["modes"].push_back(std::move(jm));
  }

  j["sampling"] = {{"error_fraction", cfg.sampling.error_fraction},
                   {"requirement_samples", cfg.sampling.requirement_samples},
                   {"mc_trials", cfg.sampling.mc_trials},
                   {"master_seed", cfg.sampling.master_seed},
                   {"bin_width", cfg.sampling.bin_width}};
  j["output_dir"] = cfg.output_dir;
  return j.dump(2) + "\n";
}

std::string format_number(double v) {
  if (std::fabs(v) < 5e-7) v = 0.0;  // avoid "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

}  // namespace rwd::config
