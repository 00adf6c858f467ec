#include <cmath>
#include <random>

#include <doctest.h>

#include "case_study.hpp"
#include "oracles.hpp"
#include "rwdispatch/market.hpp"

using namespace rwd::market;

namespace {

// Uniqueness probe: re-solve with a tiny lexicographic cost tilt in each
// direction and require the probed value to stay put.
bool dispatch_unique(const SystemSpec& spec, const WindowInput& win,
                     double tol = 1e-4) {
  const auto base = solve_window(spec, win);
  for (std::size_t i = 0; i < spec.generators.size(); ++i) {
    for (double s : {+1e-6, -1e-6}) {
      SystemSpec tilted = spec;
      tilted.generators[i].energy_cost += s;
      const auto sol = solve_window(tilted, win);
      for (std::size_t w = 0; w < base.horizon.size(); ++w)
        for (std::size_t g = 0; g < spec.generators.size(); ++g)
          if (std::fabs(sol.dispatch[w][g] - base.dispatch[w][g]) > tol)
            return false;
    }
  }
  return true;
}

void check_window_invariants(const SystemSpec& spec, const WindowInput& win,
                             const WindowSolution& sol) {
  for (std::size_t w = 0; w < sol.horizon.size(); ++w) {
    double gen = 0.0, shed = 0.0, demand = 0.0;
    for (double g : sol.dispatch[w]) gen += g;
    for (double s : sol.shed[w]) shed += s;
    for (double d : win.load_forecast[w]) demand += d;
    CHECK(std::fabs(gen + shed - (demand - win.ver_total[w])) <= 1e-8);
    double ru = 0.0, rd = 0.0;
    for (double r : sol.fru_alloc[w]) {
      CHECK(r >= -1e-9);
      ru += r;
    }
    for (double r : sol.frd_alloc[w]) {
      CHECK(r >= -1e-9);
      rd += r;
    }
    CHECK(ru >= win.frp_req[w].fru - 1e-8);
    CHECK(rd >= win.frp_req[w].frd - 1e-8);
    if (sol.price_fru[w] > 1e-7) CHECK(ru == doctest::Approx(win.frp_req[w].fru));
    if (sol.price_frd[w] > 1e-7) CHECK(rd == doctest::Approx(win.frp_req[w].frd));
    for (std::size_t i = 0; i < spec.generators.size(); ++i) {
      CHECK(sol.dispatch[w][i] + sol.fru_alloc[w][i] <=
            spec.generators[i].p_max + 1e-8);
      CHECK(sol.dispatch[w][i] - sol.frd_alloc[w][i] >=
            spec.generators[i].p_min - 1e-8);
    }
    CHECK(sol.price_fru[w] >= -1e-9);
    CHECK(sol.price_frd[w] >= -1e-9);
  }
}

}  // namespace

TEST_CASE("window LP has 14 variables and indexed rows") {
  const auto spec = fixture::system();
  const auto win = fixture::first_window();
  const auto [lp, map] = build_window_lp(spec, win);
  CHECK(lp.num_vars() == 14);
  CHECK(map.num_vars() == 14);
  CHECK(lp.eq_rows.size() == 2);
  CHECK(map.col_shed(0, 1) == 13);
  lp.validate();
}

TEST_CASE("zero requirements force zero FRP rows") {
  const auto spec = fixture::system();
  auto win = fixture::first_window(0.0, 0.0);
  const auto [lp, map] = build_window_lp(spec, win);
  CHECK(lp.ineq_rhs[map.row_fru(1)] == 0.0);
  CHECK(lp.ineq_rhs[map.row_frd(1)] == 0.0);
  const auto sol = solve_window(spec, win);
  for (const auto& per : sol.fru_alloc)
    for (double r : per) CHECK(std::fabs(r) <= 1e-8);
}

TEST_CASE("published first-window optimum") {
  const auto spec = fixture::system();
  const auto win = fixture::first_window();
  const auto sol = solve_window(spec, win);
  CHECK(dispatch_unique(spec, win));
  // the binding dispatch splits at exactly the FRD requirement
  CHECK(sol.dispatch[0][1] == doctest::Approx(5.7503).epsilon(1e-9));
  CHECK(sol.dispatch[0][0] == doctest::Approx(54.2497).epsilon(1e-9));
  CHECK(std::round(sol.dispatch[0][0] * 100) / 100 == 54.25);
  CHECK(std::round(sol.dispatch[0][1] * 100) / 100 == 5.75);
  CHECK(sol.price_fru[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  CHECK(sol.price_frd[1] == doctest::Approx(30.0).epsilon(1e-9));
  CHECK(sol.price_energy[0] == doctest::Approx(50.0).epsilon(1e-9));
  check_window_invariants(spec, win, sol);
}

TEST_CASE("cap-mode first window is merit order") {
  const auto spec = fixture::system();
  auto win = fixture::first_window(5.6451, 0.0);
  const auto sol = solve_window(spec, win);
  CHECK(sol.dispatch[0][0] == doctest::Approx(60.0));
  CHECK(sol.dispatch[0][1] == doctest::Approx(0.0).scale(1.0));
  CHECK(sol.price_fru[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  CHECK(sol.price_frd[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  check_window_invariants(spec, win, sol);
}

TEST_CASE("infeasible window names its start interval") {
  const auto spec = fixture::system();
  auto win = fixture::first_window();
  win.initial_dispatch = {100.0, 500.0};  // ramp-trapped far above net load
  win.load_forecast = {{1.0}, {1.0}};
  win.ver_total = {0.0, 0.0};
  win.start_interval = 7;
  win.horizon = {7, 8};
  try {
    solve_window(spec, win);
    FAIL("expected InfeasibleWindow");
  } catch (const InfeasibleWindow& e) {
    CHECK(e.start_interval() == 7);
  }
}

TEST_CASE("cost and emissions accounting") {
  const auto spec = fixture::system();
  CHECK(interval_cost(spec, std::vector<double>{54.25, 5.75},
                      std::vector<double>{0.0}) ==
        doctest::Approx(114.375).epsilon(1e-12));
  CHECK(interval_cost(spec, std::vector<double>{60.0, 0.0},
                      std::vector<double>{0.0}) ==
        doctest::Approx(100.0).epsilon(1e-12));
  CHECK(interval_cost(spec, std::vector<double>{0.0, 0.0},
                      std::vector<double>{0.0}) == 0.0);
  CHECK(interval_emissions(spec, std::vector<double>{54.25, 5.75}) ==
        doctest::Approx(1.1726).epsilon(1e-3));
  CHECK(interval_emissions(spec, std::vector<double>{60.0, 0.0}) ==
        doctest::Approx(1.07).epsilon(1e-12));
}

TEST_CASE("objective is monotone in the requirements") {
  const auto spec = fixture::system();
  double prev = -1.0;
  for (double frd : {0.0, 2.0, 4.0, 5.7503, 8.0}) {
    auto win = fixture::first_window(5.6451, frd);
    const auto sol = solve_window(spec, win);
    CHECK(sol.objective_value >= prev - 1e-9);
    prev = sol.objective_value;
  }
}

TEST_CASE("zero-requirement solution matches the FRP-free reduction") {
  const auto spec = fixture::system();
  const auto win = fixture::first_window(0.0, 0.0);
  const auto sol = solve_window(spec, win);
  const auto ref = oracles::window_optimum_2g(spec, win);
  REQUIRE(ref.has_value());
  CHECK(sol.objective_value == doctest::Approx(*ref).epsilon(1e-9));
}

TEST_CASE("randomized windows match the reduced-space oracle") {
  const auto spec = fixture::system();
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> ver(0.0, 30.0);
  std::uniform_real_distribution<double> req(0.0, 8.0);
  std::uniform_real_distribution<double> init(40.0, 80.0);
  // net load drawn relative to the initial dispatch so most instances are
  // reachable; a minority still lands infeasible on purpose
  std::uniform_real_distribution<double> step0(-20.0, 45.0);
  std::uniform_real_distribution<double> step1(-50.0, 50.0);
  int optimal = 0;
  for (int it = 0; it < 200; ++it) {
    WindowInput win;
    win.start_interval = 0;
    win.horizon = {0, 1};
    win.ver_total = {ver(rng), ver(rng)};
    win.initial_dispatch = {init(rng), 0.0};
    const double nl0 = win.initial_dispatch[0] + step0(rng);
    const double nl1 = std::max(5.0, nl0 + step1(rng));
    win.load_forecast = {{nl0 + win.ver_total[0]}, {nl1 + win.ver_total[1]}};
    win.frp_req = {{0.0, 0.0}, {req(rng), req(rng)}};
    const auto ref = oracles::window_optimum_2g(spec, win);
    try {
      const auto sol = solve_window(spec, win);
      ++optimal;
      REQUIRE(ref.has_value());
      CHECK(sol.objective_value ==
            doctest::Approx(*ref).epsilon(1e-7).scale(1.0));
      check_window_invariants(spec, win, sol);
    } catch (const InfeasibleWindow&) {
      CHECK(!ref.has_value());
    }
  }
  CHECK(optimal > 150);
}
