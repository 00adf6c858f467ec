#pragma once

#include <string>
#include <vector>

#include "rwdispatch/market.hpp"

namespace rwd::diagnostics {

enum class FrpDirection { FRU, FRD };

/// Symmetric-binding pattern behind a nonzero FRP price: one set of units
/// active on a capacity limit, another on a ramp limit, same interval and
/// direction.
struct BindingPattern {
  int interval = 0;  // absolute interval index
  FrpDirection direction = FrpDirection::FRU;
  std::vector<std::string> capacity_bound_units;
  std::vector<std::string> ramp_bound_units;
  double price = 0.0;  // phi, $/MWh
};

/// Max stationarity residual |-phi + nu + rho| over units with interior FRP
/// allocations (allocation > tol), both directions, all intervals.
double kkt_frp_residual(const market::WindowSolution& sol, double tol = 1e-7);

/// Reports one pattern per (advisory interval, direction) with price above
/// tol. Constraint activity is judged by primal slack, not dual magnitude,
/// so degenerate optima classify correctly.
std::vector<BindingPattern> detect_transfer(const market::SystemSpec& spec,
                                            const market::WindowSolution& sol,
                                            double tol = 1e-6);

/// Right-directional derivative of optimal window cost (hourly-rate) with
/// respect to one FRP requirement, by two solves. The authoritative price
/// check under dual degeneracy. Throws InfeasibleWindow if the perturbed
/// problem hits a hard flexibility limit.
double shadow_price_fd(const market::SystemSpec& spec,
                       const market::WindowInput& win, FrpDirection direction,
                       int horizon_offset, double eps = 1e-4);

}  // namespace rwd::diagnostics
