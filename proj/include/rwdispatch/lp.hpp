#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwd::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Fixed certificate tolerances. Chosen so that 4-decimal reported market
// quantities sit far above solver noise.
inline constexpr double kFeasTol = 1e-8;
inline constexpr double kDualTol = 1e-9;
inline constexpr double kGapTol = 1e-7;

struct Bounds {
  double lo = 0.0;
  double hi = kInfinity;
};

/// Dense LP container: minimize objective . x subject to
///   eq_rows . x = eq_rhs,  ineq_rows . x <= ineq_rhs,  lo <= x <= hi.
struct StandardLp {
  std::vector<double> objective;
  std::vector<std::vector<double>> eq_rows;
  std::vector<double> eq_rhs;
  std::vector<std::vector<double>> ineq_rows;
  std::vector<double> ineq_rhs;
  std::vector<Bounds> bounds;
  std::vector<std::string> variable_names;  // optional, empty or one per var

  std::size_t num_vars() const { return objective.size(); }

  /// Throws LpFormatError on dimension mismatch or lo > hi.
  void validate() const;
};

class LpFormatError : public std::runtime_error {
 public:
  explicit LpFormatError(const std::string& what) : std::runtime_error(what) {}
};

enum class SolveStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> primal;
  std::vector<double> dual_eq;        // free sign
  std::vector<double> dual_ineq;      // >= -kDualTol
  std::vector<double> reduced_costs;  // lower-bound mult minus upper-bound mult
  double objective_value = 0.0;
  // Infeasible: phase-1 row multipliers (eq rows then ineq rows) forming a
  // Farkas-style contradiction. Unbounded: improving ray in variable space.
  std::vector<double> certificate;
};

LpSolution solve(const StandardLp& lp);

struct OptimalityReport {
  double max_primal_residual = 0.0;
  double max_dual_violation = 0.0;
  double max_compl_slack = 0.0;
  double duality_gap = 0.0;  // relative
  bool pass = false;
};

/// Report-only KKT check of (lp, sol) from the reported multipliers.
OptimalityReport verify_optimality(const StandardLp& lp, const LpSolution& sol);

/// Plain-text matrix listing for bug reports.
std::string dump(const StandardLp& lp);

}  // namespace rwd::lp
