#pragma once

#include <map>
#include <optional>
#include <random>
#include <vector>

namespace rwd::uncertainty {

/// Forecasts keyed by the window origin at which they were issued:
/// by_origin[t].ver[offset][unit] is v_hat_{k, t+offset | t}, and .load
/// likewise for demand.
struct ForecastSeries {
  struct WindowForecast {
    std::vector<std::vector<double>> ver;   // [offset][unit], MW
    std::vector<std::vector<double>> load;  // [offset][load], MW
  };
  std::map<int, WindowForecast> by_origin;

  void validate() const;  // all forecasts >= 0, consistent widths
};

/// Per-unit curtailment amounts. The case study is uniform across units and
/// intervals; per-unit and per-interval overrides are supported.
struct CapProfile {
  double uniform = 0.0;
  std::optional<std::vector<double>> per_unit;               // [unit]
  std::map<int, std::vector<double>> per_interval_override;  // interval -> [unit]

  double at(std::size_t unit, int interval) const;
  double total(std::size_t n_units, int interval) const;
};

/// max(0, v_hat - cap) per unit.
std::vector<double> apply_cap(const std::vector<double>& forecast,
                              const CapProfile& caps, int interval);

/// Total capped generation over all wind and solar units.
double advisory_ver_total(const std::vector<double>& capped);

/// Binding-interval VER total: sum of realized values, limited by the total
/// of the previous window's capped forecasts when one exists. The min over
/// totals is what enables cross-feeding between units.
double binding_ver_total(const std::vector<double>& realized,
                         const std::optional<std::vector<double>>& prior_caps);

/// Draws each unit independently from Normal(forecast, error_fraction *
/// forecast), clamped at 0 MW.
std::vector<double> sample_realization(const std::vector<double>& forecast,
                                       double error_fraction,
                                       std::mt19937_64& rng);

/// Net-load forecast error under FBD: sum(advisory - realized) over VER
/// units, plus an optional load error term.
double net_load_delta_fbd(const std::vector<double>& advisory,
                          const std::vector<double>& realized,
                          double load_delta = 0.0);

/// Net-load forecast error under RFBD:
/// capped_advisory_total - min(realized_total, capped_advisory_total), >= 0.
double net_load_delta_rfbd(double realized_total,
                           double capped_advisory_total);

}  // namespace rwd::uncertainty
