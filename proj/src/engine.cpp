#include "rwdispatch/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rwd::engine {

void DispatchMode::validate() const {
  if (kind == Kind::FBD) {
    if (caps.uniform != 0.0 || caps.per_unit || !caps.per_interval_override.empty())
      throw std::invalid_argument("FBD mode carries no cap profile");
    if (first_window_binding_cap)
      throw std::invalid_argument("first_window_binding_cap needs RFBD");
  }
}

double RollingTrajectory::total_cost() const {
  double s = 0.0;
  for (const auto& r : records) s += r.cost;
  return s;
}

double RollingTrajectory::total_emissions() const {
  double s = 0.0;
  for (const auto& r : records) s += r.emissions;
  return s;
}

std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint32_t tag,
                            std::uint32_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32), tag, index};
  return std::mt19937_64(seq);
}

namespace {

std::vector<double> realized_or_forecast(
    const Realization& realization,
    const uncertainty::ForecastSeries& forecasts, int origin, int interval) {
  if (auto it = realization.ver_by_interval.find(interval);
      it != realization.ver_by_interval.end())
    return it->second;
  return forecasts.by_origin.at(origin).ver[static_cast<std::size_t>(
      interval - origin)];
}

market::WindowInput assemble_window(
    const market::SystemSpec& spec, const DispatchMode& mode,
    const uncertainty::ForecastSeries& forecasts,
    const Realization& realization, const RequirementFn& requirements,
    int origin, bool is_first_window, const int* prev_origin,
    const std::vector<double>& initial_dispatch) {
  const auto& wf = forecasts.by_origin.at(origin);
  const int wlen = static_cast<int>(
      std::min<std::size_t>(wf.ver.size(),
                            static_cast<std::size_t>(spec.window_length)));
  market::WindowInput win;
  win.start_interval = origin;
  win.initial_dispatch = initial_dispatch;
  for (int w = 0; w < wlen; ++w) {
    const int interval = origin + w;
    win.horizon.push_back(interval);
    win.load_forecast.push_back(wf.load[static_cast<std::size_t>(w)]);
    if (w == 0) {
      const auto realized =
          realized_or_forecast(realization, forecasts, origin, interval);
      if (mode.kind == DispatchMode::Kind::FBD) {
        win.ver_total.push_back(uncertainty::binding_ver_total(realized, {}));
      } else {
        std::optional<std::vector<double>> prior_caps;
        if (!is_first_window) {
          const auto& prev = forecasts.by_origin.at(*prev_origin);
          const std::size_t off =
              static_cast<std::size_t>(interval - *prev_origin);
          if (off < prev.ver.size())
            prior_caps =
                uncertainty::apply_cap(prev.ver[off], mode.caps, interval);
        } else if (mode.first_window_binding_cap) {
          prior_caps = uncertainty::apply_cap(wf.ver[0], mode.caps, interval);
        }
        win.ver_total.push_back(
            uncertainty::binding_ver_total(realized, prior_caps));
      }
      win.frp_req.push_back({0.0, 0.0});
    } else {
      const auto& fc = wf.ver[static_cast<std::size_t>(w)];
      if (mode.kind == DispatchMode::Kind::FBD)
        win.ver_total.push_back(uncertainty::advisory_ver_total(fc));
      else
        win.ver_total.push_back(uncertainty::advisory_ver_total(
            uncertainty::apply_cap(fc, mode.caps, interval)));
      win.frp_req.push_back(requirements(origin, interval));
    }
  }
  return win;
}

}  // namespace

RollingTrajectory run_rolling(const market::SystemSpec& spec,
                              const DispatchMode& mode,
                              const uncertainty::ForecastSeries& forecasts,
                              const Realization& realization,
                              const RequirementFn& requirements,
                              const std::vector<double>& initial_dispatch) {
  spec.validate();
  mode.validate();
  forecasts.validate();
  if (forecasts.by_origin.empty())
    throw std::invalid_argument("forecast series has no windows");

  RollingTrajectory traj;
  std::vector<double> initial = initial_dispatch;
  bool first = true;
  int prev_origin = 0;
  for (const auto& [origin, wf] : forecasts.by_origin) {
    (void)wf;
    const auto win = assemble_window(spec, mode, forecasts, realization,
                                     requirements, origin, first,
                                     first ? nullptr : &prev_origin, initial);
    const auto sol = market::solve_window(spec, win);

    BindingRecord rec;
    rec.interval = origin;
    rec.dispatch = sol.dispatch[0];
    rec.shed = sol.shed[0];
    rec.cost = market::interval_cost(spec, rec.dispatch, rec.shed);
    rec.emissions = market::interval_emissions(spec, rec.dispatch);
    rec.price_energy = sol.price_energy[0];
    for (std::size_t w = 1; w < sol.horizon.size(); ++w) {
      rec.advisory_price_fru.emplace_back(sol.horizon[w], sol.price_fru[w]);
      rec.advisory_price_frd.emplace_back(sol.horizon[w], sol.price_frd[w]);
    }
    rec.transfer_patterns = diagnostics::detect_transfer(spec, sol);
    traj.records.push_back(std::move(rec));

    initial = sol.dispatch[0];
    prev_origin = origin;
    first = false;
  }
  return traj;
}

McSummary monte_carlo(const market::SystemSpec& spec, const DispatchMode& mode,
                      const uncertainty::ForecastSeries& forecasts,
                      int n_trials, std::uint64_t master_seed,
                      const RequirementFn& requirements,
                      const std::vector<double>& initial_dispatch,
                      double error_fraction) {
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");

  McSummary mc;
  mc.trials = n_trials;
  mc.master_seed = master_seed;

  // Requirements actually used, per advisory interval of each window.
  {
    bool first = true;
    for (const auto& [origin, wf] : forecasts.by_origin) {
      const int wlen = static_cast<int>(std::min<std::size_t>(
          wf.ver.size(), static_cast<std::size_t>(spec.window_length)));
      for (int w = 1; w < wlen; ++w)
        mc.requirements_used.emplace_back(origin + w,
                                          requirements(origin, origin + w));
      (void)first;
      first = false;
    }
  }

  std::vector<std::vector<double>> costs;  // [trial][binding record]
  std::vector<std::vector<double>> emissions;
  for (int j = 0; j < n_trials; ++j) {
    auto rng = make_stream(master_seed, kTrialStreamTag,
                           static_cast<std::uint32_t>(j));
    // Sample the realization for every interval that becomes binding after
    // the first window, from the previous window's advisory forecast.
    Realization realization;
    const int* prev = nullptr;
    int prev_key = 0;
    for (const auto& [origin, wf] : forecasts.by_origin) {
      (void)wf;
      if (prev) {
        const auto& pwf = forecasts.by_origin.at(*prev);
        const std::size_t off = static_cast<std::size_t>(origin - *prev);
        if (off < pwf.ver.size())
          realization.ver_by_interval[origin] = uncertainty::sample_realization(
              pwf.ver[off], error_fraction, rng);
      }
      prev_key = origin;
      prev = &prev_key;
    }
    try {
      const auto traj = run_rolling(spec, mode, forecasts, realization,
                                    requirements, initial_dispatch);
      std::vector<double> c, e;
      if (mc.intervals.empty())
        for (const auto& r : traj.records) mc.intervals.push_back(r.interval);
      for (const auto& r : traj.records) {
        c.push_back(r.cost);
        e.push_back(r.emissions);
      }
      costs.push_back(std::move(c));
      emissions.push_back(std::move(e));
    } catch (const market::InfeasibleWindow&) {
      ++mc.infeasible_trial_count;
    }
  }
  if (costs.empty())
    throw std::runtime_error("all Monte Carlo trials were infeasible");

  const std::size_t nrec = costs.front().size();
  const double n = static_cast<double>(costs.size());
  mc.mean_cost.assign(nrec, 0.0);
  mc.sd_cost.assign(nrec, 0.0);
  mc.mean_emissions.assign(nrec, 0.0);
  mc.sd_emissions.assign(nrec, 0.0);
  for (std::size_t k = 0; k < nrec; ++k) {
    for (std::size_t j = 0; j < costs.size(); ++j) {
      mc.mean_cost[k] += costs[j][k];
      mc.mean_emissions[k] += emissions[j][k];
    }
    mc.mean_cost[k] /= n;
    mc.mean_emissions[k] /= n;
    if (costs.size() < 2) {
      mc.sd_undefined = true;
      continue;
    }
    double vc = 0.0, ve = 0.0;
    for (std::size_t j = 0; j < costs.size(); ++j) {
      vc += (costs[j][k] - mc.mean_cost[k]) * (costs[j][k] - mc.mean_cost[k]);
      ve += (emissions[j][k] - mc.mean_emissions[k]) *
            (emissions[j][k] - mc.mean_emissions[k]);
    }
    mc.sd_cost[k] = std::sqrt(vc / (n - 1.0));
    mc.sd_emissions[k] = std::sqrt(ve / (n - 1.0));
  }
  return mc;
}

ModeTotals totals_report(const std::string& mode_name, const McSummary& mc) {
  ModeTotals t;
  t.mode = mode_name;
  t.total_cost =
      std::accumulate(mc.mean_cost.begin(), mc.mean_cost.end(), 0.0);
  t.total_emissions = std::accumulate(mc.mean_emissions.begin(),
                                      mc.mean_emissions.end(), 0.0);
  return t;
}

frp::SampleSet requirement_samples(const market::SystemSpec& spec,
                                   const DispatchMode& mode,
                                   const uncertainty::ForecastSeries& forecasts,
                                   int n_samples, std::uint64_t master_seed,
                                   double error_fraction) {
  (void)spec;
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  if (forecasts.by_origin.empty())
    throw std::invalid_argument("forecast series has no windows");
  const auto& first = forecasts.by_origin.begin()->second;
  const int origin = forecasts.by_origin.begin()->first;
  if (first.ver.size() < 2)
    throw std::invalid_argument(
        "first window has no advisory interval to sample");
  const auto& advisory = first.ver[1];
  const int interval = origin + 1;

  frp::SampleSet set;
  set.provenance = mode.name;
  set.samples.reserve(static_cast<std::size_t>(n_samples));
  auto rng = make_stream(master_seed, kRequirementStreamTag, 0);
  const bool rfbd = mode.kind == DispatchMode::Kind::RFBD;
  double capped_total = 0.0;
  if (rfbd)
    capped_total = uncertainty::advisory_ver_total(
        uncertainty::apply_cap(advisory, mode.caps, interval));
  for (int s = 0; s < n_samples; ++s) {
    const auto realized =
        uncertainty::sample_realization(advisory, error_fraction, rng);
    if (rfbd) {
      const double total =
          std::accumulate(realized.begin(), realized.end(), 0.0);
      set.samples.push_back(uncertainty::net_load_delta_rfbd(total, capped_total));
    } else {
      set.samples.push_back(uncertainty::net_load_delta_fbd(advisory, realized));
    }
  }
  return set;
}

}  // namespace rwd::engine
