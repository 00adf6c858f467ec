#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rwdispatch/lp.hpp"

namespace rwd::market {

struct GeneratorSpec {
  std::string id;
  double energy_cost = 0.0;  // $/MWh
  double p_min = 0.0;        // MW
  double p_max = 0.0;        // MW
  double ramp_down_mag = 0.0;  // MW per interval, nonnegative
  double ramp_up_mag = 0.0;    // MW per interval, nonnegative
  double emission_factor = 0.0;  // tCO2/MWh
};

struct LoadSpec {
  std::string id;
  double shed_penalty = 0.0;  // $/MWh
};

struct VerUnit {
  std::string id;
  enum class Kind { Wind, Solar } kind = Kind::Wind;
};

struct SystemSpec {
  std::vector<GeneratorSpec> generators;
  std::vector<LoadSpec> loads;
  std::vector<VerUnit> ver_units;
  double interval_hours = 1.0;  // hours per dispatch interval
  int window_length = 2;        // intervals per window

  void validate() const;
};

struct FrpRequirement {
  double fru = 0.0;  // MW
  double frd = 0.0;  // MW
};

/// One rolling window's right-hand data. ver_total already reflects the
/// dispatch mode (raw forecast sums for FBD, capped/min-rule totals for RFBD).
struct WindowInput {
  int start_interval = 0;
  std::vector<int> horizon;  // absolute interval indices, possibly truncated
  std::vector<std::vector<double>> load_forecast;  // [offset][load], MW
  std::vector<double> ver_total;                   // [offset], MW
  std::vector<FrpRequirement> frp_req;             // [offset]
  std::vector<double> initial_dispatch;            // per generator, MW
};

/// Bijection between (quantity, unit, interval offset) and LP column/row
/// indices of the compiled window LP.
struct IndexMap {
  int n_gen = 0;
  int n_load = 0;
  int horizon_len = 0;

  int num_vars() const {
    return horizon_len * (3 * n_gen + n_load);
  }
  int col_g(int i, int w) const { return w * (3 * n_gen + n_load) + i; }
  int col_ru(int i, int w) const {
    return w * (3 * n_gen + n_load) + n_gen + i;
  }
  int col_rd(int i, int w) const {
    return w * (3 * n_gen + n_load) + 2 * n_gen + i;
  }
  int col_shed(int l, int w) const {
    return w * (3 * n_gen + n_load) + 3 * n_gen + l;
  }

  int row_balance(int w) const { return w; }  // equality rows
  // inequality rows, grouped per interval
  int ineq_per_interval() const { return 2 + 4 * n_gen + n_load; }
  int row_fru(int w) const { return w * ineq_per_interval(); }
  int row_frd(int w) const { return w * ineq_per_interval() + 1; }
  int row_cap_hi(int i, int w) const {
    return w * ineq_per_interval() + 2 + 4 * i;
  }
  int row_cap_lo(int i, int w) const {
    return w * ineq_per_interval() + 2 + 4 * i + 1;
  }
  int row_ramp_hi(int i, int w) const {
    return w * ineq_per_interval() + 2 + 4 * i + 2;
  }
  int row_ramp_lo(int i, int w) const {
    return w * ineq_per_interval() + 2 + 4 * i + 3;
  }
  int row_shed_hi(int l, int w) const {
    return w * ineq_per_interval() + 2 + 4 * n_gen + l;
  }
};

/// Thrown when a window LP has an empty feasible set (e.g. a ramp-trapped
/// initial condition). Never relaxed silently.
class InfeasibleWindow : public std::runtime_error {
 public:
  InfeasibleWindow(int start_interval, const std::string& what)
      : std::runtime_error(what), start_interval_(start_interval) {}
  int start_interval() const { return start_interval_; }

 private:
  int start_interval_;
};

/// Primal dispatch plus every constraint multiplier, in window-local
/// [offset][unit] layout. Objective uses hourly-rate coefficients ($/MWh x MW)
/// so prices come out in $/MWh; money and emissions accounting applies
/// interval_hours separately.
struct WindowSolution {
  int start_interval = 0;
  std::vector<int> horizon;

  std::vector<std::vector<double>> dispatch;   // g  [offset][gen]
  std::vector<std::vector<double>> fru_alloc;  // r^U
  std::vector<std::vector<double>> frd_alloc;  // r^D
  std::vector<std::vector<double>> shed;       // [offset][load]

  std::vector<double> price_energy;  // lambda per offset
  std::vector<double> price_fru;     // phi^U
  std::vector<double> price_frd;     // phi^D

  std::vector<std::vector<double>> mult_cap_lo, mult_cap_hi;    // nu
  std::vector<std::vector<double>> mult_ramp_lo, mult_ramp_hi;  // rho
  std::vector<std::vector<double>> mult_shed_lo, mult_shed_hi;  // gamma

  // primal slacks, for activity detection under dual degeneracy
  std::vector<std::vector<double>> slack_cap_lo, slack_cap_hi;
  std::vector<std::vector<double>> slack_ramp_lo, slack_ramp_hi;

  std::vector<FrpRequirement> frp_req;  // copied from the input

  double objective_value = 0.0;  // hourly-rate
};

std::pair<lp::StandardLp, IndexMap> build_window_lp(const SystemSpec& spec,
                                                    const WindowInput& win);

/// Solves the window LP and maps primal and dual values back to named
/// quantities. Throws InfeasibleWindow when the LP is infeasible.
WindowSolution solve_window(const SystemSpec& spec, const WindowInput& win);

/// (sum_i C_i g_i + sum_l C_l shed_l) * interval_hours, in currency.
double interval_cost(const SystemSpec& spec, std::span<const double> dispatch,
                     std::span<const double> shed);

/// sum_i e_i g_i * interval_hours, in tCO2.
double interval_emissions(const SystemSpec& spec,
                          std::span<const double> dispatch);

}  // namespace rwd::market
