#include "rwdispatch/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>

namespace rwd::lp {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kEnterTol = 1e-9;

bool is_finite(double x) { return std::isfinite(x); }

// Solves A^T y = c by Gaussian elimination with partial pivoting.
// A is given row-major (n x n); returns y of length n.
std::vector<double> solve_transposed(std::vector<std::vector<double>> a,
                                     std::vector<double> c) {
  const std::size_t n = c.size();
  // Work on the transpose explicitly.
  std::vector<std::vector<double>> m(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a[j][i];
    m[i][n] = c[i];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    std::swap(m[col], m[piv]);
    if (std::fabs(m[col][col]) < 1e-12) continue;  // singular direction, y stays 0
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      if (f == 0.0) continue;
      for (std::size_t j = col; j <= n; ++j) m[r][j] -= f * m[col][j];
    }
  }
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = std::fabs(m[i][i]) > 1e-12 ? m[i][n] / m[i][i] : 0.0;
  return y;
}

enum class ColKind { Structural, Slack, Artificial };

struct Transform {
  // one entry per original variable
  struct Var {
    int col = -1;      // primary transformed column
    int col_neg = -1;  // second column when split (free variable)
    double shift = 0.0;
    bool mirrored = false;  // x = shift - z instead of shift + z
  };
  std::vector<Var> vars;
  int n_struct = 0;
};

struct Tableau {
  std::vector<std::vector<double>> rows;  // m x ncols
  std::vector<double> rhs;                // m
  std::vector<int> basis;                 // m, column index
  std::vector<int> orig_row;              // m, row id in the equality form
  int ncols = 0;

  void pivot(std::size_t r, int c, std::vector<double>& cost,
             double& cost_rhs) {
    const double p = rows[r][c];
    for (int j = 0; j < ncols; ++j) rows[r][j] /= p;
    rhs[r] /= p;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k == r) continue;
      const double f = rows[k][c];
      if (f == 0.0) continue;
      for (int j = 0; j < ncols; ++j) rows[k][j] -= f * rows[r][j];
      rows[k][c] = 0.0;
      rhs[k] -= f * rhs[r];
    }
    const double f = cost[c];
    if (f != 0.0) {
      for (int j = 0; j < ncols; ++j) cost[j] -= f * rows[r][j];
      cost[c] = 0.0;
      cost_rhs -= f * rhs[r];
    }
    basis[r] = c;
  }
};

// Reduce a cost row against the current basis so nonbasic reduced costs are
// consistent.
void reduce_cost_row(Tableau& t, std::vector<double>& cost, double& cost_rhs) {
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double f = cost[t.basis[r]];
    if (f == 0.0) continue;
    for (int j = 0; j < t.ncols; ++j) cost[j] -= f * t.rows[r][j];
    cost[t.basis[r]] = 0.0;
    cost_rhs -= f * t.rhs[r];
  }
}

struct SimplexOutcome {
  enum { Optimal, Unbounded } kind = Optimal;
  int unbounded_col = -1;
};

SimplexOutcome run_simplex(Tableau& t, std::vector<double>& cost,
                           double& cost_rhs,
                           const std::vector<bool>& allowed) {
  const std::size_t bland_after = 50 * (t.rows.size() + 1) * (t.ncols + 1);
  std::size_t iter = 0;
  for (;;) {
    ++iter;
    const bool bland = iter > bland_after;
    int enter = -1;
    double best = -kEnterTol;
    for (int j = 0; j < t.ncols; ++j) {
      if (!allowed[j]) continue;
      if (cost[j] < best) {
        enter = j;
        if (bland) break;
        best = cost[j];
      }
    }
    if (enter < 0) return {SimplexOutcome::Optimal, -1};
    // ratio test, ties broken by smallest basis index
    std::ptrdiff_t leave = -1;
    double best_ratio = kInfinity;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const double a = t.rows[r][enter];
      if (a <= kPivotTol) continue;
      const double ratio = t.rhs[r] / a;
      if (ratio < best_ratio - 1e-12 ||
          (ratio < best_ratio + 1e-12 &&
           (leave < 0 || t.basis[r] < t.basis[leave]))) {
        best_ratio = ratio;
        leave = static_cast<std::ptrdiff_t>(r);
      }
    }
    if (leave < 0) return {SimplexOutcome::Unbounded, enter};
    t.pivot(static_cast<std::size_t>(leave), enter, cost, cost_rhs);
  }
}

}  // namespace

void StandardLp::validate() const {
  const std::size_t n = num_vars();
  if (bounds.size() != n)
    throw LpFormatError("bounds size does not match variable count");
  if (eq_rows.size() != eq_rhs.size())
    throw LpFormatError("equality rows and rhs count mismatch");
  if (ineq_rows.size() != ineq_rhs.size())
    throw LpFormatError("inequality rows and rhs count mismatch");
  for (const auto& row : eq_rows)
    if (row.size() != n) throw LpFormatError("equality row length mismatch");
  for (const auto& row : ineq_rows)
    if (row.size() != n) throw LpFormatError("inequality row length mismatch");
  for (const auto& b : bounds) {
    if (std::isnan(b.lo) || std::isnan(b.hi))
      throw LpFormatError("NaN bound");
    if (b.lo > b.hi) throw LpFormatError("lower bound exceeds upper bound");
  }
  if (!variable_names.empty() && variable_names.size() != n)
    throw LpFormatError("variable name count mismatch");
}

LpSolution solve(const StandardLp& lp) {
  lp.validate();
  const std::size_t n = lp.num_vars();
  const std::size_t me = lp.eq_rows.size();
  const std::size_t mu0 = lp.ineq_rows.size();

  // --- transform to min c~.z, E z (= / <=) h, z >= 0 -----------------------
  Transform tf;
  tf.vars.resize(n);
  struct BoundRow {
    int col;
    double rhs;
    std::size_t var;
  };
  std::vector<BoundRow> bound_rows;
  for (std::size_t j = 0; j < n; ++j) {
    auto& v = tf.vars[j];
    const Bounds& b = lp.bounds[j];
    if (is_finite(b.lo)) {
      v.col = tf.n_struct++;
      v.shift = b.lo;
      if (is_finite(b.hi)) bound_rows.push_back({v.col, b.hi - b.lo, j});
    } else if (is_finite(b.hi)) {
      v.col = tf.n_struct++;
      v.shift = b.hi;
      v.mirrored = true;
    } else {
      v.col = tf.n_struct++;
      v.col_neg = tf.n_struct++;
    }
  }
  const int ns = tf.n_struct;
  const std::size_t mu = mu0 + bound_rows.size();
  const std::size_t m0 = me + mu;

  auto transformed_row = [&](const std::vector<double>& arow, double brow) {
    std::vector<double> out(static_cast<std::size_t>(ns), 0.0);
    double rhs = brow;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = arow[j];
      if (a == 0.0) continue;
      const auto& v = tf.vars[j];
      if (v.col_neg >= 0) {
        out[v.col] += a;
        out[v.col_neg] -= a;
      } else if (v.mirrored) {
        out[v.col] -= a;
        rhs -= a * v.shift;
      } else {
        out[v.col] += a;
        rhs -= a * v.shift;
      }
    }
    return std::make_pair(out, rhs);
  };

  std::vector<double> ct(static_cast<std::size_t>(ns), 0.0);
  double obj_const = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double c = lp.objective[j];
    if (c == 0.0) continue;
    const auto& v = tf.vars[j];
    if (v.col_neg >= 0) {
      ct[v.col] += c;
      ct[v.col_neg] -= c;
    } else if (v.mirrored) {
      ct[v.col] -= c;
      obj_const += c * v.shift;
    } else {
      ct[v.col] += c;
      obj_const += c * v.shift;
    }
  }

  // Equality form: columns = ns structural + mu slacks (+ artificials later).
  const int n_slack = static_cast<int>(mu);
  std::vector<std::vector<double>> e_rows;
  std::vector<double> e_rhs;
  std::vector<int> flip(m0, 1);
  e_rows.reserve(m0);
  for (std::size_t r = 0; r < me; ++r) {
    auto [row, rhs] = transformed_row(lp.eq_rows[r], lp.eq_rhs[r]);
    row.resize(static_cast<std::size_t>(ns + n_slack), 0.0);
    e_rows.push_back(std::move(row));
    e_rhs.push_back(rhs);
  }
  for (std::size_t r = 0; r < mu0; ++r) {
    auto [row, rhs] = transformed_row(lp.ineq_rows[r], lp.ineq_rhs[r]);
    row.resize(static_cast<std::size_t>(ns + n_slack), 0.0);
    row[static_cast<std::size_t>(ns) + r] = 1.0;
    e_rows.push_back(std::move(row));
    e_rhs.push_back(rhs);
  }
  for (std::size_t k = 0; k < bound_rows.size(); ++k) {
    std::vector<double> row(static_cast<std::size_t>(ns + n_slack), 0.0);
    row[bound_rows[k].col] = 1.0;
    row[static_cast<std::size_t>(ns) + mu0 + k] = 1.0;
    e_rows.push_back(std::move(row));
    e_rhs.push_back(bound_rows[k].rhs);
  }
  for (std::size_t r = 0; r < m0; ++r) {
    if (e_rhs[r] < 0.0) {
      flip[r] = -1;
      for (auto& a : e_rows[r]) a = -a;
      e_rhs[r] = -e_rhs[r];
    }
  }

  // Initial basis: slack where it has +1 coefficient, artificial otherwise.
  Tableau t;
  t.rows = e_rows;
  t.rhs = e_rhs;
  t.orig_row.resize(m0);
  for (std::size_t r = 0; r < m0; ++r) t.orig_row[r] = static_cast<int>(r);
  std::vector<int> art_for_row(m0, -1);
  int n_art = 0;
  t.basis.assign(m0, -1);
  for (std::size_t r = 0; r < m0; ++r) {
    if (r >= me && flip[r] == 1) {
      t.basis[r] = ns + static_cast<int>(r - me);
    } else {
      art_for_row[r] = n_art++;
    }
  }
  t.ncols = ns + n_slack + n_art;
  for (std::size_t r = 0; r < m0; ++r) {
    t.rows[r].resize(static_cast<std::size_t>(t.ncols), 0.0);
    if (art_for_row[r] >= 0) {
      const int c = ns + n_slack + art_for_row[r];
      t.rows[r][c] = 1.0;
      t.basis[r] = c;
    }
  }
  // Keep the pre-pivot equality form for dual extraction.
  const std::vector<std::vector<double>> e0 = t.rows;

  std::vector<ColKind> kind(static_cast<std::size_t>(t.ncols));
  for (int j = 0; j < t.ncols; ++j)
    kind[j] = j < ns               ? ColKind::Structural
              : j < ns + n_slack   ? ColKind::Slack
                                   : ColKind::Artificial;

  LpSolution sol;

  // --- phase 1 --------------------------------------------------------------
  if (n_art > 0) {
    std::vector<double> cost1(static_cast<std::size_t>(t.ncols), 0.0);
    double cost_rhs1 = 0.0;
    for (int j = ns + n_slack; j < t.ncols; ++j) cost1[j] = 1.0;
    reduce_cost_row(t, cost1, cost_rhs1);
    std::vector<bool> allowed(static_cast<std::size_t>(t.ncols), true);
    run_simplex(t, cost1, cost_rhs1, allowed);
    const double phase1_obj = -cost_rhs1;
    double scale = 1.0;
    for (double b : e_rhs) scale = std::max(scale, std::fabs(b));
    if (phase1_obj > 1e-7 * scale) {
      sol.status = SolveStatus::Infeasible;
      // Farkas-style certificate from the phase-1 basis.
      const std::size_t mb = t.rows.size();
      std::vector<std::vector<double>> bmat(mb, std::vector<double>(mb, 0.0));
      std::vector<double> cb(mb, 0.0);
      for (std::size_t r = 0; r < mb; ++r) {
        for (std::size_t k = 0; k < mb; ++k)
          bmat[k][r] = e0[t.orig_row[k]][t.basis[r]];
        cb[r] = kind[t.basis[r]] == ColKind::Artificial ? 1.0 : 0.0;
      }
      auto y = solve_transposed(bmat, cb);
      sol.certificate.assign(me + mu0, 0.0);
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::size_t orow = static_cast<std::size_t>(t.orig_row[r]);
        if (orow < me + mu0)
          sol.certificate[orow] = flip[orow] * y[r];
      }
      return sol;
    }
    // Drive artificials out of the basis; delete redundant rows.
    for (std::size_t r = 0; r < t.rows.size();) {
      if (kind[t.basis[r]] != ColKind::Artificial) {
        ++r;
        continue;
      }
      int piv = -1;
      for (int j = 0; j < ns + n_slack; ++j) {
        if (std::fabs(t.rows[r][j]) > 1e-7) {
          piv = j;
          break;
        }
      }
      if (piv >= 0) {
        t.pivot(r, piv, cost1, cost_rhs1);
        ++r;
      } else {
        t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(r));
        t.rhs.erase(t.rhs.begin() + static_cast<std::ptrdiff_t>(r));
        t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(r));
        t.orig_row.erase(t.orig_row.begin() + static_cast<std::ptrdiff_t>(r));
      }
    }
  }

  // --- phase 2 --------------------------------------------------------------
  std::vector<double> cost2(static_cast<std::size_t>(t.ncols), 0.0);
  double cost_rhs2 = 0.0;
  for (int j = 0; j < ns; ++j) cost2[j] = ct[j];
  reduce_cost_row(t, cost2, cost_rhs2);
  std::vector<bool> allowed(static_cast<std::size_t>(t.ncols), true);
  for (int j = ns + n_slack; j < t.ncols; ++j) allowed[j] = false;
  const auto outcome = run_simplex(t, cost2, cost_rhs2, allowed);
  if (outcome.kind == SimplexOutcome::Unbounded) {
    sol.status = SolveStatus::Unbounded;
    // Improving ray in original variable space.
    std::vector<double> dz(static_cast<std::size_t>(ns), 0.0);
    if (outcome.unbounded_col < ns) dz[outcome.unbounded_col] = 1.0;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
      if (t.basis[r] < ns) dz[t.basis[r]] -= t.rows[r][outcome.unbounded_col];
    sol.certificate.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& v = tf.vars[j];
      double d = dz[v.col];
      if (v.col_neg >= 0) d -= dz[v.col_neg];
      if (v.mirrored) d = -d;
      sol.certificate[j] = d;
    }
    return sol;
  }

  // --- extraction -----------------------------------------------------------
  std::vector<double> z(static_cast<std::size_t>(ns + n_slack + n_art), 0.0);
  for (std::size_t r = 0; r < t.rows.size(); ++r) z[t.basis[r]] = t.rhs[r];

  sol.primal.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = tf.vars[j];
    double x = z[v.col];
    if (v.col_neg >= 0) x -= z[v.col_neg];
    x = v.mirrored ? v.shift - x : v.shift + x;
    sol.primal[j] = x;
  }
  sol.objective_value = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    sol.objective_value += lp.objective[j] * sol.primal[j];

  // Duals from B^T y = c_B on the pre-pivot equality form.
  const std::size_t mb = t.rows.size();
  std::vector<std::vector<double>> bmat(mb, std::vector<double>(mb, 0.0));
  std::vector<double> cb(mb, 0.0);
  for (std::size_t r = 0; r < mb; ++r) {
    for (std::size_t k = 0; k < mb; ++k)
      bmat[k][r] = e0[t.orig_row[k]][t.basis[r]];
    cb[r] = t.basis[r] < ns ? ct[t.basis[r]] : 0.0;
  }
  const auto y = solve_transposed(bmat, cb);
  std::vector<double> y_user(m0, 0.0);
  for (std::size_t r = 0; r < mb; ++r) {
    const std::size_t orow = static_cast<std::size_t>(t.orig_row[r]);
    y_user[orow] = flip[orow] * y[r];
  }

  sol.dual_eq.assign(me, 0.0);
  for (std::size_t r = 0; r < me; ++r) sol.dual_eq[r] = y_user[r];
  sol.dual_ineq.assign(mu0, 0.0);
  for (std::size_t r = 0; r < mu0; ++r) sol.dual_ineq[r] = -y_user[me + r];

  sol.reduced_costs.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double rc = lp.objective[j];
    for (std::size_t r = 0; r < me; ++r) rc -= y_user[r] * lp.eq_rows[r][j];
    for (std::size_t r = 0; r < mu0; ++r)
      rc -= y_user[me + r] * lp.ineq_rows[r][j];
    sol.reduced_costs[j] = rc;
  }

  sol.status = SolveStatus::Optimal;
  return sol;
}

OptimalityReport verify_optimality(const StandardLp& lp,
                                   const LpSolution& sol) {
  OptimalityReport rep;
  const std::size_t n = lp.num_vars();
  const std::size_t me = lp.eq_rows.size();
  const std::size_t mu = lp.ineq_rows.size();
  const auto& x = sol.primal;

  auto scaled = [](double v, double rhs) {
    return std::fabs(v) / std::max(1.0, std::fabs(rhs));
  };

  // primal feasibility
  for (std::size_t r = 0; r < me; ++r) {
    double ax = 0.0;
    for (std::size_t j = 0; j < n; ++j) ax += lp.eq_rows[r][j] * x[j];
    rep.max_primal_residual =
        std::max(rep.max_primal_residual, scaled(ax - lp.eq_rhs[r], lp.eq_rhs[r]));
  }
  std::vector<double> ineq_slack(mu, 0.0);
  for (std::size_t r = 0; r < mu; ++r) {
    double ax = 0.0;
    for (std::size_t j = 0; j < n; ++j) ax += lp.ineq_rows[r][j] * x[j];
    ineq_slack[r] = lp.ineq_rhs[r] - ax;
    if (ineq_slack[r] < 0.0)
      rep.max_primal_residual = std::max(
          rep.max_primal_residual, scaled(ineq_slack[r], lp.ineq_rhs[r]));
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto& b = lp.bounds[j];
    if (is_finite(b.lo))
      rep.max_primal_residual =
          std::max(rep.max_primal_residual, std::max(0.0, b.lo - x[j]));
    if (is_finite(b.hi))
      rep.max_primal_residual =
          std::max(rep.max_primal_residual, std::max(0.0, x[j] - b.hi));
  }

  // dual feasibility and stationarity via reduced costs recomputed from the
  // reported multipliers
  std::vector<double> rc(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double v = lp.objective[j];
    for (std::size_t r = 0; r < me; ++r)
      v -= sol.dual_eq[r] * lp.eq_rows[r][j];
    for (std::size_t r = 0; r < mu; ++r)
      v += sol.dual_ineq[r] * lp.ineq_rows[r][j];
    rc[j] = v;
  }
  for (std::size_t r = 0; r < mu; ++r)
    rep.max_dual_violation =
        std::max(rep.max_dual_violation, -sol.dual_ineq[r]);
  const double act_tol = 1e-6;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& b = lp.bounds[j];
    const bool at_lo = is_finite(b.lo) && x[j] - b.lo <= act_tol;
    const bool at_hi = is_finite(b.hi) && b.hi - x[j] <= act_tol;
    double viol;
    if (at_lo && at_hi)
      viol = 0.0;
    else if (at_lo)
      viol = std::max(0.0, -rc[j]);
    else if (at_hi)
      viol = std::max(0.0, rc[j]);
    else
      viol = std::fabs(rc[j]);
    rep.max_dual_violation = std::max(rep.max_dual_violation, viol);
  }

  // complementary slackness
  for (std::size_t r = 0; r < mu; ++r)
    rep.max_compl_slack =
        std::max(rep.max_compl_slack,
                 scaled(sol.dual_ineq[r] * ineq_slack[r], lp.ineq_rhs[r]));

  // duality gap: dual objective includes bound contributions via rc
  double dual_obj = 0.0;
  for (std::size_t r = 0; r < me; ++r) dual_obj += sol.dual_eq[r] * lp.eq_rhs[r];
  for (std::size_t r = 0; r < mu; ++r)
    dual_obj -= sol.dual_ineq[r] * lp.ineq_rhs[r];
  for (std::size_t j = 0; j < n; ++j) {
    const auto& b = lp.bounds[j];
    if (rc[j] > 0.0 && is_finite(b.lo))
      dual_obj += rc[j] * b.lo;
    else if (rc[j] < 0.0 && is_finite(b.hi))
      dual_obj += rc[j] * b.hi;
  }
  rep.duality_gap = std::fabs(sol.objective_value - dual_obj) /
                    std::max(1.0, std::fabs(sol.objective_value));

  rep.pass = rep.max_primal_residual <= kFeasTol &&
             rep.max_dual_violation <= 1e-6 &&
             rep.max_compl_slack <= kGapTol && rep.duality_gap <= kGapTol;
  return rep;
}

std::string dump(const StandardLp& lp) {
  std::ostringstream os;
  os.precision(17);
  const std::size_t n = lp.num_vars();
  auto name = [&](std::size_t j) {
    return lp.variable_names.empty() ? "x" + std::to_string(j)
                                     : lp.variable_names[j];
  };
  os << "minimize";
  for (std::size_t j = 0; j < n; ++j)
    if (lp.objective[j] != 0.0)
      os << " + " << lp.objective[j] << "*" << name(j);
  os << "\n";
  auto row = [&](const std::vector<double>& a, const char* rel, double b) {
    bool first = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[j] == 0.0) continue;
      os << (first ? "  " : " + ") << a[j] << "*" << name(j);
      first = false;
    }
    os << " " << rel << " " << b << "\n";
  };
  for (std::size_t r = 0; r < lp.eq_rows.size(); ++r)
    row(lp.eq_rows[r], "=", lp.eq_rhs[r]);
  for (std::size_t r = 0; r < lp.ineq_rows.size(); ++r)
    row(lp.ineq_rows[r], "<=", lp.ineq_rhs[r]);
  for (std::size_t j = 0; j < n; ++j)
    os << "  " << lp.bounds[j].lo << " <= " << name(j) << " <= "
       << lp.bounds[j].hi << "\n";
  return os.str();
}

}  // namespace rwd::lp
