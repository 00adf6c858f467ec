#include "rwdispatch/commands.hpp"

#include <cctype>
#include <fstream>
#include <iostream>
#include <map>

#include "rwdispatch/frp.hpp"

namespace rwd::commands {

namespace fs = std::filesystem;
using config::format_number;

namespace {

struct ModeResults {
  market::FrpRequirement requirement;
  frp::SampleSet samples;
};

std::uint64_t effective_seed(const config::RunConfig& cfg,
                             const Overrides& ov) {
  return ov.seed.value_or(cfg.sampling.master_seed);
}

fs::path out_dir(const config::RunConfig& cfg, const Overrides& ov) {
  fs::path dir = ov.out_dir.value_or(cfg.output_dir);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_csv(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);  // LF line endings everywhere
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

ModeResults mode_requirements(const config::RunConfig& cfg,
                              const config::ModeConfig& mode,
                              std::uint64_t seed) {
  ModeResults r;
  r.samples = engine::requirement_samples(
      cfg.system, mode.mode, cfg.forecasts, cfg.sampling.requirement_samples,
      seed, cfg.sampling.error_fraction);
  r.requirement = frp::requirements_from_samples(r.samples);
  return r;
}

engine::RequirementFn uniform_requirement(market::FrpRequirement req) {
  return [req](int, int) { return req; };
}

std::string sanitize(const std::string& name) {
  std::string s = name;
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  return s;
}

}  // namespace

int cmd_requirements(const config::RunConfig& cfg, const Overrides& ov) {
  const auto dir = out_dir(cfg, ov);
  const auto seed = effective_seed(cfg, ov);
  auto req_csv = open_csv(dir / "frp_requirements.csv");
  req_csv << "mode,interval,R_U,R_D\n";
  const int interval = cfg.forecasts.by_origin.begin()->first + 1;
  for (const auto& mode : cfg.modes) {
    const auto r = mode_requirements(cfg, mode, seed);
    req_csv << mode.mode.name << ',' << interval << ','
            << format_number(r.requirement.fru) << ','
            << format_number(r.requirement.frd) << "\n";
    const auto hist =
        frp::build_histogram(r.samples.samples, cfg.sampling.bin_width);
    auto hist_csv =
        open_csv(dir / ("histogram_" + sanitize(mode.mode.name) + ".csv"));
    hist_csv << "bin_start,bin_end,count\n";
    for (std::size_t b = 0; b < hist.counts.size(); ++b)
      hist_csv << format_number(hist.bin_edges[b]) << ','
               << format_number(hist.bin_edges[b + 1]) << ',' << hist.counts[b]
               << "\n";
  }
  return 0;
}

int cmd_run(const config::RunConfig& cfg, const std::string& mode_name,
            const Overrides& ov) {
  const auto& mode = cfg.find_mode(mode_name);
  const auto dir = out_dir(cfg, ov);
  const auto seed = effective_seed(cfg, ov);

  const auto reqs = mode_requirements(cfg, mode, cfg.sampling.master_seed);
  engine::Realization realization;  // empty: realization = forecast
  if (ov.seed) {
    auto rng = engine::make_stream(seed, engine::kTrialStreamTag, 0);
    const int* prev = nullptr;
    int prev_key = 0;
    for (const auto& [origin, wf] : cfg.forecasts.by_origin) {
      (void)wf;
      if (prev) {
        const auto& pwf = cfg.forecasts.by_origin.at(*prev);
        const std::size_t off = static_cast<std::size_t>(origin - *prev);
        if (off < pwf.ver.size())
          realization.ver_by_interval[origin] = uncertainty::sample_realization(
              pwf.ver[off], cfg.sampling.error_fraction, rng);
      }
      prev_key = origin;
      prev = &prev_key;
    }
  }

  engine::RollingTrajectory traj;
  try {
    traj = engine::run_rolling(cfg.system, mode.mode, cfg.forecasts,
                               realization, uniform_requirement(reqs.requirement),
                               mode.initial_dispatch);
  } catch (const market::InfeasibleWindow& e) {
    std::cerr << "infeasible window at interval " << e.start_interval() << "\n";
    return 1;
  }

  auto csv = open_csv(dir / "binding_dispatch.csv");
  csv << "interval,unit,mw,cost,emissions,lambda,phi_u,phi_d,transfer\n";
  for (const auto& rec : traj.records) {
    // first advisory prices of the window solved at this origin
    const double phi_u = rec.advisory_price_fru.empty()
                             ? 0.0
                             : rec.advisory_price_fru.front().second;
    const double phi_d = rec.advisory_price_frd.empty()
                             ? 0.0
                             : rec.advisory_price_frd.front().second;
    std::string transfer;
    for (const auto& p : rec.transfer_patterns) {
      if (!transfer.empty()) transfer += ';';
      transfer += std::to_string(p.interval) + '|' +
                  (p.direction == diagnostics::FrpDirection::FRU ? "FRU" : "FRD");
      transfer += '|';
      for (std::size_t k = 0; k < p.capacity_bound_units.size(); ++k)
        transfer += (k ? "+" : "") + p.capacity_bound_units[k];
      transfer += '|';
      for (std::size_t k = 0; k < p.ramp_bound_units.size(); ++k)
        transfer += (k ? "+" : "") + p.ramp_bound_units[k];
      transfer += '|' + format_number(p.price);
    }
    for (std::size_t i = 0; i < cfg.system.generators.size(); ++i) {
      csv << rec.interval << ',' << cfg.system.generators[i].id << ','
          << format_number(rec.dispatch[i]) << ','
          << format_number(rec.cost) << ',' << format_number(rec.emissions)
          << ',' << format_number(rec.price_energy) << ','
          << format_number(phi_u) << ',' << format_number(phi_d) << ','
          << transfer << "\n";
    }
  }
  return 0;
}

namespace {

int run_mc_all(const config::RunConfig& cfg, const Overrides& ov,
               bool write_summary) {
  const auto dir = out_dir(cfg, ov);
  const auto seed = effective_seed(cfg, ov);
  const int trials = ov.trials.value_or(cfg.sampling.mc_trials);

  std::ofstream summary;
  if (write_summary) {
    summary = open_csv(dir / "mc_summary.csv");
    summary << "mode,interval,trials,mean_cost,sd_cost,mean_emissions,"
               "sd_emissions,infeasible_count,sd_undefined\n";
  }
  auto totals_csv = open_csv(dir / "totals.csv");
  totals_csv << "mode,total_cost,total_emissions\n";

  for (const auto& mode : cfg.modes) {
    const auto reqs = mode_requirements(cfg, mode, cfg.sampling.master_seed);
    engine::McSummary mc;
    try {
      mc = engine::monte_carlo(cfg.system, mode.mode, cfg.forecasts, trials,
                               seed, uniform_requirement(reqs.requirement),
                               mode.initial_dispatch,
                               cfg.sampling.error_fraction);
    } catch (const std::runtime_error& e) {
      std::cerr << "mode " << mode.mode.name << ": " << e.what() << "\n";
      return 1;
    }
    if (write_summary) {
      for (std::size_t k = 0; k < mc.intervals.size(); ++k)
        summary << mode.mode.name << ',' << mc.intervals[k] << ','
                << mc.trials << ',' << format_number(mc.mean_cost[k]) << ','
                << format_number(mc.sd_cost[k]) << ','
                << format_number(mc.mean_emissions[k]) << ','
                << format_number(mc.sd_emissions[k]) << ','
                << mc.infeasible_trial_count << ','
                << (mc.sd_undefined ? 1 : 0) << "\n";
    }
    const auto totals = engine::totals_report(mode.mode.name, mc);
    totals_csv << totals.mode << ',' << format_number(totals.total_cost) << ','
               << format_number(totals.total_emissions) << "\n";
  }
  return 0;
}

}  // namespace

int cmd_mc(const config::RunConfig& cfg, const Overrides& ov) {
  return run_mc_all(cfg, ov, /*write_summary=*/true);
}

int cmd_report(const config::RunConfig& cfg, const Overrides& ov) {
  return run_mc_all(cfg, ov, /*write_summary=*/false);
}

}  // namespace rwd::commands
