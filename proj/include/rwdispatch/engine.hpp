#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rwdispatch/diagnostics.hpp"
#include "rwdispatch/frp.hpp"
#include "rwdispatch/market.hpp"
#include "rwdispatch/uncertainty.hpp"

namespace rwd::engine {

struct DispatchMode {
  enum class Kind { FBD, RFBD } kind = Kind::FBD;
  std::string name = "FBD";
  uncertainty::CapProfile caps;  // RFBD only
  // Whether the study's first window inherits a cap on its own binding
  // interval (no predecessor window exists to supply one).
  bool first_window_binding_cap = false;

  void validate() const;
};

/// Realized per-unit VER output keyed by absolute interval index. Intervals
/// absent from the map realize exactly at their own-window forecast.
struct Realization {
  std::map<int, std::vector<double>> ver_by_interval;
};

/// FRP requirement for an advisory interval, by window origin and absolute
/// interval index.
using RequirementFn =
    std::function<market::FrpRequirement(int window_origin, int interval)>;

struct BindingRecord {
  int interval = 0;
  std::vector<double> dispatch;  // per generator, MW
  std::vector<double> shed;      // per load, MW
  double cost = 0.0;             // currency for this interval
  double emissions = 0.0;        // tCO2
  double price_energy = 0.0;     // lambda at the binding interval
  // advisory prices of the window solved at this origin: (interval, phi)
  std::vector<std::pair<int, double>> advisory_price_fru;
  std::vector<std::pair<int, double>> advisory_price_frd;
  std::vector<diagnostics::BindingPattern> transfer_patterns;
};

struct RollingTrajectory {
  std::vector<BindingRecord> records;
  double total_cost() const;
  double total_emissions() const;
};

/// Executes the cascaded rolling windows under one dispatch mode: assembles
/// each WindowInput, solves it, records the binding interval, and carries the
/// binding dispatch forward as the next window's initial condition.
RollingTrajectory run_rolling(const market::SystemSpec& spec,
                              const DispatchMode& mode,
                              const uncertainty::ForecastSeries& forecasts,
                              const Realization& realization,
                              const RequirementFn& requirements,
                              const std::vector<double>& initial_dispatch);

struct McSummary {
  int trials = 0;
  std::uint64_t master_seed = 0;
  std::vector<int> intervals;  // executed binding intervals
  std::vector<double> mean_cost, sd_cost;            // per binding interval
  std::vector<double> mean_emissions, sd_emissions;  // per binding interval
  std::vector<std::pair<int, market::FrpRequirement>>
      requirements_used;  // per advisory interval (absolute index)
  int infeasible_trial_count = 0;
  bool sd_undefined = false;  // single feasible trial
};

/// Runs n_trials independent trajectories. Trial j samples binding-interval
/// realizations from stream (master_seed, j); aggregation runs in ascending
/// trial order so sums are reproducible. Infeasible trials are counted and
/// excluded from the means; throws if every trial is infeasible.
McSummary monte_carlo(const market::SystemSpec& spec, const DispatchMode& mode,
                      const uncertainty::ForecastSeries& forecasts,
                      int n_trials, std::uint64_t master_seed,
                      const RequirementFn& requirements,
                      const std::vector<double>& initial_dispatch,
                      double error_fraction);

struct ModeTotals {
  std::string mode;
  double total_cost = 0.0;
  double total_emissions = 0.0;
};

/// Sums per-binding-interval means across the executed horizon.
ModeTotals totals_report(const std::string& mode_name, const McSummary& mc);

/// Draws the shared realization sample set for the first advisory interval
/// and maps it through the mode's net-load delta definition. The same RNG
/// stream and draw order across modes keeps samples aligned.
frp::SampleSet requirement_samples(const market::SystemSpec& spec,
                                   const DispatchMode& mode,
                                   const uncertainty::ForecastSeries& forecasts,
                                   int n_samples, std::uint64_t master_seed,
                                   double error_fraction);

/// RNG stream for (master_seed, tag, index); tags keep requirement sampling
/// and Monte Carlo trials on distinct streams.
std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint32_t tag,
                            std::uint32_t index);

inline constexpr std::uint32_t kRequirementStreamTag = 0xA5u;
inline constexpr std::uint32_t kTrialStreamTag = 0xB7u;

}  // namespace rwd::engine
