#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "rwdispatch/lp.hpp"

using namespace rwd::lp;

namespace {

StandardLp two_var_dispatch() {
  StandardLp lp;
  lp.objective = {20.0, 50.0};
  lp.eq_rows = {{1.0, 1.0}};
  lp.eq_rhs = {60.0};
  lp.bounds = {{0.0, 100.0}, {0.0, 500.0}};
  return lp;
}

}  // namespace

TEST_CASE("single variable with active lower bound") {
  StandardLp lp;
  lp.objective = {1.0};
  lp.bounds = {{3.0, 10.0}};
  const auto sol = solve(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.primal[0] == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(sol.objective_value == doctest::Approx(3.0).epsilon(1e-10));
  // multiplier on the active lower bound shows up as the reduced cost
  CHECK(sol.reduced_costs[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("two-variable dispatch vertex") {
  const auto lp = two_var_dispatch();
  const auto sol = solve(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.primal[0] == doctest::Approx(60.0).epsilon(1e-10));
  CHECK(sol.primal[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
  CHECK(sol.dual_eq[0] == doctest::Approx(20.0).epsilon(1e-9));
  CHECK(sol.objective_value == doctest::Approx(1200.0).epsilon(1e-10));
}

TEST_CASE("infeasible box") {
  StandardLp lp;
  lp.objective = {1.0};
  lp.ineq_rows = {{1.0}};
  lp.ineq_rhs = {-1.0};
  lp.bounds = {{0.0, kInfinity}};
  const auto sol = solve(lp);
  CHECK(sol.status == SolveStatus::Infeasible);
  CHECK(!sol.certificate.empty());
}

TEST_CASE("unbounded instance reports a ray") {
  StandardLp lp;
  lp.objective = {-1.0};
  lp.bounds = {{0.0, kInfinity}};
  const auto sol = solve(lp);
  CHECK(sol.status == SolveStatus::Unbounded);
}

TEST_CASE("malformed input is a format error, not a status") {
  StandardLp lp;
  lp.objective = {1.0, 2.0};
  lp.eq_rows = {{1.0}};  // wrong width
  lp.eq_rhs = {0.0};
  lp.bounds = {{0.0, 1.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(solve(lp), LpFormatError);
}

TEST_CASE("verify_optimality self-consistency and constructed violation") {
  const auto lp = two_var_dispatch();
  auto sol = solve(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  auto rep = verify_optimality(lp, sol);
  CHECK(rep.pass);
  CHECK(rep.max_primal_residual <= 1e-8);
  CHECK(rep.max_compl_slack <= 1e-7);

  sol.primal[1] += 0.1;
  rep = verify_optimality(lp, sol);
  CHECK(!rep.pass);
  // residuals are scaled by max(1, |rhs|); the violated row has rhs 60
  CHECK(rep.max_primal_residual == doctest::Approx(0.1 / 60.0).epsilon(1e-6));
}

TEST_CASE("determinism: identical instance, identical objective bits") {
  const auto lp = two_var_dispatch();
  const auto a = solve(lp);
  const auto b = solve(lp);
  CHECK(a.objective_value == b.objective_value);
  CHECK(a.primal == b.primal);
}

TEST_CASE("random 2-variable instances match vertex enumeration") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_real_distribution<double> width(0.5, 10.0);
  int solved = 0;
  for (int it = 0; it < 300; ++it) {
    StandardLp lp;
    lp.objective = {coef(rng), coef(rng)};
    lp.bounds = {{0.0, width(rng)}, {0.0, width(rng)}};
    const int m = 1 + static_cast<int>(std::floor(width(rng))) % 4;
    for (int r = 0; r < m; ++r) {
      lp.ineq_rows.push_back({coef(rng), coef(rng)});
      lp.ineq_rhs.push_back(width(rng));
    }
    const auto sol = solve(lp);
    const auto ref = oracles::vertex_enum_min(oracles::to_dense(lp));
    if (sol.status == SolveStatus::Optimal) {
      ++solved;
      REQUIRE(ref.has_value());
      CHECK(sol.objective_value ==
            doctest::Approx(ref->first).epsilon(1e-8).scale(1.0));
      const auto rep = verify_optimality(lp, sol);
      CHECK(rep.pass);
      // complementary slackness on every inequality row
      for (std::size_t r = 0; r < lp.ineq_rows.size(); ++r) {
        double lhs = 0.0;
        for (int k = 0; k < 2; ++k) lhs += lp.ineq_rows[r][k] * sol.primal[k];
        const double slack = lp.ineq_rhs[r] - lhs;
        CHECK(std::fabs(sol.dual_ineq[r] * slack) <=
              1e-7 * std::max(1.0, std::fabs(lp.ineq_rhs[r])));
      }
    } else {
      CHECK(!ref.has_value());
    }
  }
  CHECK(solved > 100);  // the generator must actually exercise the solver
}
