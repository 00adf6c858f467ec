#include "rwdispatch/diagnostics.hpp"

#include <cmath>

namespace rwd::diagnostics {

double kkt_frp_residual(const market::WindowSolution& sol, double tol) {
  double worst = 0.0;
  const std::size_t W = sol.horizon.size();
  for (std::size_t w = 0; w < W; ++w) {
    for (std::size_t i = 0; i < sol.dispatch[w].size(); ++i) {
      if (sol.fru_alloc[w][i] > tol) {
        const double res = -sol.price_fru[w] + sol.mult_cap_hi[w][i] +
                           sol.mult_ramp_hi[w][i];
        worst = std::max(worst, std::fabs(res));
      }
      if (sol.frd_alloc[w][i] > tol) {
        const double res = -sol.price_frd[w] + sol.mult_cap_lo[w][i] +
                           sol.mult_ramp_lo[w][i];
        worst = std::max(worst, std::fabs(res));
      }
    }
  }
  return worst;
}

std::vector<BindingPattern> detect_transfer(const market::SystemSpec& spec,
                                            const market::WindowSolution& sol,
                                            double tol) {
  std::vector<BindingPattern> out;
  const std::size_t W = sol.horizon.size();
  auto slack_active = [&](double slack, double rhs) {
    return slack <= 1e-7 * std::max(1.0, std::fabs(rhs)) + tol;
  };
  for (std::size_t w = 1; w < W; ++w) {  // advisory intervals only
    if (sol.price_fru[w] > tol) {
      BindingPattern p;
      p.interval = sol.horizon[w];
      p.direction = FrpDirection::FRU;
      p.price = sol.price_fru[w];
      for (std::size_t i = 0; i < spec.generators.size(); ++i) {
        if (slack_active(sol.slack_cap_hi[w][i], spec.generators[i].p_max))
          p.capacity_bound_units.push_back(spec.generators[i].id);
        if (slack_active(sol.slack_ramp_hi[w][i],
                         spec.generators[i].ramp_up_mag))
          p.ramp_bound_units.push_back(spec.generators[i].id);
      }
      out.push_back(std::move(p));
    }
    if (sol.price_frd[w] > tol) {
      BindingPattern p;
      p.interval = sol.horizon[w];
      p.direction = FrpDirection::FRD;
      p.price = sol.price_frd[w];
      for (std::size_t i = 0; i < spec.generators.size(); ++i) {
        if (slack_active(sol.slack_cap_lo[w][i], spec.generators[i].p_min))
          p.capacity_bound_units.push_back(spec.generators[i].id);
        if (slack_active(sol.slack_ramp_lo[w][i],
                         spec.generators[i].ramp_down_mag))
          p.ramp_bound_units.push_back(spec.generators[i].id);
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

double shadow_price_fd(const market::SystemSpec& spec,
                       const market::WindowInput& win, FrpDirection direction,
                       int horizon_offset, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const auto base = market::solve_window(spec, win);
  market::WindowInput bumped = win;
  auto& req = bumped.frp_req.at(static_cast<std::size_t>(horizon_offset));
  if (direction == FrpDirection::FRU)
    req.fru += eps;
  else
    req.frd += eps;
  const auto pert = market::solve_window(spec, bumped);
  return (pert.objective_value - base.objective_value) / eps;
}

}  // namespace rwd::diagnostics
