#include "rwdispatch/uncertainty.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rwd::uncertainty {

void ForecastSeries::validate() const {
  for (const auto& [origin, wf] : by_origin) {
    if (wf.ver.size() != wf.load.size())
      throw std::invalid_argument("forecast horizon lengths disagree at origin " +
                                  std::to_string(origin));
    for (const auto& per_unit : wf.ver)
      for (double v : per_unit)
        if (v < 0.0)
          throw std::invalid_argument("negative VER forecast at origin " +
                                      std::to_string(origin));
    for (const auto& per_load : wf.load)
      for (double d : per_load)
        if (d < 0.0)
          throw std::invalid_argument("negative load forecast at origin " +
                                      std::to_string(origin));
  }
}

double CapProfile::at(std::size_t unit, int interval) const {
  if (auto it = per_interval_override.find(interval);
      it != per_interval_override.end() && unit < it->second.size())
    return it->second[unit];
  if (per_unit && unit < per_unit->size()) return (*per_unit)[unit];
  return uniform;
}

double CapProfile::total(std::size_t n_units, int interval) const {
  double s = 0.0;
  for (std::size_t k = 0; k < n_units; ++k) s += at(k, interval);
  return s;
}

std::vector<double> apply_cap(const std::vector<double>& forecast,
                              const CapProfile& caps, int interval) {
  std::vector<double> out(forecast.size());
  for (std::size_t k = 0; k < forecast.size(); ++k) {
    const double cap = caps.at(k, interval);
    if (cap < 0.0) throw std::invalid_argument("negative curtailment cap");
    out[k] = std::max(0.0, forecast[k] - cap);
  }
  return out;
}

double advisory_ver_total(const std::vector<double>& capped) {
  return std::accumulate(capped.begin(), capped.end(), 0.0);
}

double binding_ver_total(
    const std::vector<double>& realized,
    const std::optional<std::vector<double>>& prior_caps) {
  const double total = std::accumulate(realized.begin(), realized.end(), 0.0);
  if (!prior_caps) return total;
  const double cap_total =
      std::accumulate(prior_caps->begin(), prior_caps->end(), 0.0);
  return std::min(total, cap_total);
}

std::vector<double> sample_realization(const std::vector<double>& forecast,
                                       double error_fraction,
                                       std::mt19937_64& rng) {
  if (error_fraction < 0.0)
    throw std::invalid_argument("error_fraction must be nonnegative");
  std::vector<double> out(forecast.size());
  for (std::size_t k = 0; k < forecast.size(); ++k) {
    if (error_fraction == 0.0 || forecast[k] == 0.0) {
      out[k] = forecast[k];
      continue;
    }
    std::normal_distribution<double> dist(forecast[k],
                                          error_fraction * forecast[k]);
    out[k] = std::max(0.0, dist(rng));
  }
  return out;
}

double net_load_delta_fbd(const std::vector<double>& advisory,
                          const std::vector<double>& realized,
                          double load_delta) {
  if (advisory.size() != realized.size())
    throw std::invalid_argument("advisory/realized size mismatch");
  double s = load_delta;
  for (std::size_t k = 0; k < advisory.size(); ++k)
    s += advisory[k] - realized[k];
  return s;
}

double net_load_delta_rfbd(double realized_total,
                           double capped_advisory_total) {
  return capped_advisory_total -
         std::min(realized_total, capped_advisory_total);
}

}  // namespace rwd::uncertainty
