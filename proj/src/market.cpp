#include "rwdispatch/market.hpp"

#include <cmath>
#include <numeric>

namespace rwd::market {

void SystemSpec::validate() const {
  if (generators.empty())
    throw std::invalid_argument("system needs at least one generator");
  if (window_length < 2)
    throw std::invalid_argument("window_length must be >= 2");
  if (!(interval_hours > 0.0))
    throw std::invalid_argument("interval_hours must be positive");
  for (const auto& g : generators) {
    if (g.p_min < 0.0 || g.p_min > g.p_max)
      throw std::invalid_argument("generator " + g.id +
                                  ": need 0 <= p_min <= p_max");
    if (g.ramp_down_mag < 0.0 || g.ramp_up_mag < 0.0)
      throw std::invalid_argument("generator " + g.id +
                                  ": ramp magnitudes must be nonnegative");
    if (g.emission_factor < 0.0)
      throw std::invalid_argument("generator " + g.id +
                                  ": emission factor must be nonnegative");
  }
  for (const auto& l : loads)
    if (l.shed_penalty < 0.0)
      throw std::invalid_argument("load " + l.id +
                                  ": shed penalty must be nonnegative");
}

namespace {

void check_window(const SystemSpec& spec, const WindowInput& win) {
  const std::size_t wlen = win.horizon.size();
  if (wlen == 0) throw std::invalid_argument("empty window horizon");
  if (win.load_forecast.size() != wlen || win.ver_total.size() != wlen ||
      win.frp_req.size() != wlen)
    throw std::invalid_argument("window series lengths disagree with horizon");
  if (win.initial_dispatch.size() != spec.generators.size())
    throw std::invalid_argument("initial dispatch length != generator count");
  for (std::size_t w = 0; w < wlen; ++w) {
    if (win.load_forecast[w].size() != spec.loads.size())
      throw std::invalid_argument("load forecast length != load count");
    for (double d : win.load_forecast[w])
      if (d < 0.0) throw std::invalid_argument("negative load forecast");
    if (win.ver_total[w] < 0.0)
      throw std::invalid_argument("negative VER total");
    if (win.frp_req[w].fru < 0.0 || win.frp_req[w].frd < 0.0)
      throw std::invalid_argument("negative FRP requirement");
  }
  if (win.frp_req[0].fru != 0.0 || win.frp_req[0].frd != 0.0)
    throw std::invalid_argument(
        "binding-interval FRP requirement must be (0, 0)");
}

}  // namespace

std::pair<lp::StandardLp, IndexMap> build_window_lp(const SystemSpec& spec,
                                                    const WindowInput& win) {
  spec.validate();
  check_window(spec, win);

  IndexMap m;
  m.n_gen = static_cast<int>(spec.generators.size());
  m.n_load = static_cast<int>(spec.loads.size());
  m.horizon_len = static_cast<int>(win.horizon.size());

  const int nv = m.num_vars();
  lp::StandardLp out;
  out.objective.assign(nv, 0.0);
  out.bounds.assign(nv, lp::Bounds{0.0, lp::kInfinity});
  out.variable_names.assign(nv, {});

  for (int w = 0; w < m.horizon_len; ++w) {
    const std::string suf = "," + std::to_string(win.horizon[w]);
    for (int i = 0; i < m.n_gen; ++i) {
      out.objective[m.col_g(i, w)] = spec.generators[i].energy_cost;
      out.variable_names[m.col_g(i, w)] = "g[" + spec.generators[i].id + suf + "]";
      out.variable_names[m.col_ru(i, w)] =
          "rU[" + spec.generators[i].id + suf + "]";
      out.variable_names[m.col_rd(i, w)] =
          "rD[" + spec.generators[i].id + suf + "]";
    }
    for (int l = 0; l < m.n_load; ++l) {
      out.objective[m.col_shed(l, w)] = spec.loads[l].shed_penalty;
      out.variable_names[m.col_shed(l, w)] =
          "shed[" + spec.loads[l].id + suf + "]";
    }
  }

  auto zero_row = [nv] { return std::vector<double>(nv, 0.0); };

  // Equality rows: power balance per interval,
  //   sum_i g + sum_l shed = sum_l d_hat - ver_total.
  for (int w = 0; w < m.horizon_len; ++w) {
    auto row = zero_row();
    for (int i = 0; i < m.n_gen; ++i) row[m.col_g(i, w)] = 1.0;
    for (int l = 0; l < m.n_load; ++l) row[m.col_shed(l, w)] = 1.0;
    const double demand = std::accumulate(win.load_forecast[w].begin(),
                                          win.load_forecast[w].end(), 0.0);
    out.eq_rows.push_back(std::move(row));
    out.eq_rhs.push_back(demand - win.ver_total[w]);
  }

  // Inequality rows (a.x <= b), grouped per interval in IndexMap order.
  for (int w = 0; w < m.horizon_len; ++w) {
    {  // FRU sum: -sum r^U <= -R^U (procurement may exceed R at zero cost)
      auto row = zero_row();
      for (int i = 0; i < m.n_gen; ++i) row[m.col_ru(i, w)] = -1.0;
      out.ineq_rows.push_back(std::move(row));
      out.ineq_rhs.push_back(-win.frp_req[w].fru);
    }
    {  // FRD sum
      auto row = zero_row();
      for (int i = 0; i < m.n_gen; ++i) row[m.col_rd(i, w)] = -1.0;
      out.ineq_rows.push_back(std::move(row));
      out.ineq_rhs.push_back(-win.frp_req[w].frd);
    }
    for (int i = 0; i < m.n_gen; ++i) {
      const auto& gen = spec.generators[i];
      {  // capacity high: g + r^U <= p_max
        auto row = zero_row();
        row[m.col_g(i, w)] = 1.0;
        row[m.col_ru(i, w)] = 1.0;
        out.ineq_rows.push_back(std::move(row));
        out.ineq_rhs.push_back(gen.p_max);
      }
      {  // capacity low: -g + r^D <= -p_min
        auto row = zero_row();
        row[m.col_g(i, w)] = -1.0;
        row[m.col_rd(i, w)] = 1.0;
        out.ineq_rows.push_back(std::move(row));
        out.ineq_rhs.push_back(-gen.p_min);
      }
      {  // ramp high: g_w - g_{w-1} + r^U <= ramp_up
        auto row = zero_row();
        row[m.col_g(i, w)] = 1.0;
        row[m.col_ru(i, w)] = 1.0;
        double rhs = gen.ramp_up_mag;
        if (w == 0)
          rhs += win.initial_dispatch[i];
        else
          row[m.col_g(i, w - 1)] = -1.0;
        out.ineq_rows.push_back(std::move(row));
        out.ineq_rhs.push_back(rhs);
      }
      {  // ramp low: -g_w + g_{w-1} + r^D <= ramp_down
        auto row = zero_row();
        row[m.col_g(i, w)] = -1.0;
        row[m.col_rd(i, w)] = 1.0;
        double rhs = gen.ramp_down_mag;
        if (w == 0)
          rhs -= win.initial_dispatch[i];
        else
          row[m.col_g(i, w - 1)] = 1.0;
        out.ineq_rows.push_back(std::move(row));
        out.ineq_rhs.push_back(rhs);
      }
    }
    for (int l = 0; l < m.n_load; ++l) {  // shed <= d_hat
      auto row = zero_row();
      row[m.col_shed(l, w)] = 1.0;
      out.ineq_rows.push_back(std::move(row));
      out.ineq_rhs.push_back(win.load_forecast[w][l]);
    }
  }

  return {std::move(out), m};
}

WindowSolution solve_window(const SystemSpec& spec, const WindowInput& win) {
  auto [lprob, m] = build_window_lp(spec, win);
  const auto sol = lp::solve(lprob);
  if (sol.status == lp::SolveStatus::Infeasible)
    throw InfeasibleWindow(win.start_interval,
                           "window starting at interval " +
                               std::to_string(win.start_interval) +
                               " is infeasible");
  if (sol.status == lp::SolveStatus::Unbounded)
    throw std::logic_error("window LP unbounded; malformed system spec");

  WindowSolution ws;
  ws.start_interval = win.start_interval;
  ws.horizon = win.horizon;
  ws.frp_req = win.frp_req;
  ws.objective_value = sol.objective_value;

  const int W = m.horizon_len;
  auto grid = [&](int cols) {
    return std::vector<std::vector<double>>(
        static_cast<std::size_t>(W), std::vector<double>(cols, 0.0));
  };
  ws.dispatch = grid(m.n_gen);
  ws.fru_alloc = grid(m.n_gen);
  ws.frd_alloc = grid(m.n_gen);
  ws.shed = grid(m.n_load);
  ws.mult_cap_lo = grid(m.n_gen);
  ws.mult_cap_hi = grid(m.n_gen);
  ws.mult_ramp_lo = grid(m.n_gen);
  ws.mult_ramp_hi = grid(m.n_gen);
  ws.mult_shed_lo = grid(m.n_load);
  ws.mult_shed_hi = grid(m.n_load);
  ws.slack_cap_lo = grid(m.n_gen);
  ws.slack_cap_hi = grid(m.n_gen);
  ws.slack_ramp_lo = grid(m.n_gen);
  ws.slack_ramp_hi = grid(m.n_gen);
  ws.price_energy.assign(W, 0.0);
  ws.price_fru.assign(W, 0.0);
  ws.price_frd.assign(W, 0.0);

  for (int w = 0; w < W; ++w) {
    ws.price_energy[w] = sol.dual_eq[m.row_balance(w)];
    ws.price_fru[w] = sol.dual_ineq[m.row_fru(w)];
    ws.price_frd[w] = sol.dual_ineq[m.row_frd(w)];
    for (int i = 0; i < m.n_gen; ++i) {
      const auto& gen = spec.generators[i];
      const double g = sol.primal[m.col_g(i, w)];
      const double ru = sol.primal[m.col_ru(i, w)];
      const double rd = sol.primal[m.col_rd(i, w)];
      const double gprev =
          w == 0 ? win.initial_dispatch[i] : sol.primal[m.col_g(i, w - 1)];
      ws.dispatch[w][i] = g;
      ws.fru_alloc[w][i] = ru;
      ws.frd_alloc[w][i] = rd;
      ws.mult_cap_hi[w][i] = sol.dual_ineq[m.row_cap_hi(i, w)];
      ws.mult_cap_lo[w][i] = sol.dual_ineq[m.row_cap_lo(i, w)];
      ws.mult_ramp_hi[w][i] = sol.dual_ineq[m.row_ramp_hi(i, w)];
      ws.mult_ramp_lo[w][i] = sol.dual_ineq[m.row_ramp_lo(i, w)];
      ws.slack_cap_hi[w][i] = gen.p_max - (g + ru);
      ws.slack_cap_lo[w][i] = (g - rd) - gen.p_min;
      ws.slack_ramp_hi[w][i] = gen.ramp_up_mag - (g - gprev + ru);
      ws.slack_ramp_lo[w][i] = gen.ramp_down_mag + (g - gprev - rd);
    }
    for (int l = 0; l < m.n_load; ++l) {
      ws.shed[w][l] = sol.primal[m.col_shed(l, w)];
      ws.mult_shed_hi[w][l] = sol.dual_ineq[m.row_shed_hi(l, w)];
      // shed lower bound lives as a variable bound; its multiplier is the
      // reduced cost
      ws.mult_shed_lo[w][l] = sol.reduced_costs[m.col_shed(l, w)];
    }
  }
  return ws;
}

double interval_cost(const SystemSpec& spec, std::span<const double> dispatch,
                     std::span<const double> shed) {
  if (dispatch.size() != spec.generators.size())
    throw std::invalid_argument("dispatch length != generator count");
  double rate = 0.0;
  for (std::size_t i = 0; i < dispatch.size(); ++i)
    rate += spec.generators[i].energy_cost * dispatch[i];
  for (std::size_t l = 0; l < shed.size() && l < spec.loads.size(); ++l)
    rate += spec.loads[l].shed_penalty * shed[l];
  return rate * spec.interval_hours;
}

double interval_emissions(const SystemSpec& spec,
                          std::span<const double> dispatch) {
  if (dispatch.size() != spec.generators.size())
    throw std::invalid_argument("dispatch length != generator count");
  double rate = 0.0;
  for (std::size_t i = 0; i < dispatch.size(); ++i)
    rate += spec.generators[i].emission_factor * dispatch[i];
  return rate * spec.interval_hours;
}

}  // namespace rwd::market
