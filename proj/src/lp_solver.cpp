#include "linreg/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "linreg/errors.hpp"

namespace linreg::lp {
namespace {

constexpr double kPivotEps = 1e-9;

// How each user variable maps onto the nonnegative standard-form columns.
struct VarMap {
  enum Kind { kShiftLower, kMirrorUpper, kSplitFree } kind;
  std::size_t col = 0;
  std::size_t col_neg = 0;  // kSplitFree only
  double offset = 0.0;      // lower (kShiftLower) or upper (kMirrorUpper)
};

// Dense tableau kept in canonical form: basic columns are exact unit vectors.
struct Tableau {
  std::size_t rows = 0;
  std::size_t cols = 0;  // structural columns, excludes rhs
  std::vector<double> a;  // rows x (cols + 1), last column is rhs
  std::vector<std::size_t> basis;

  double& at(std::size_t r, std::size_t c) { return a[r * (cols + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a[r * (cols + 1) + c]; }
  double& rhs(std::size_t r) { return a[r * (cols + 1) + cols]; }
  double rhs(std::size_t r) const { return a[r * (cols + 1) + cols]; }
};

void validate(const LinearProgram& lp) {
  const std::size_t n = lp.n_vars();
  if (n == 0) throw InputError("LP has no variables");
  for (double c : lp.objective) {
    if (!std::isfinite(c)) throw InputError("non-finite objective coefficient");
  }
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const Constraint& row = lp.constraints[i];
    if (row.coeffs.size() != n) {
      throw InputError("constraint " + std::to_string(i) + " has " +
                       std::to_string(row.coeffs.size()) + " coefficients, expected " +
                       std::to_string(n));
    }
    for (double c : row.coeffs) {
      if (!std::isfinite(c)) throw InputError("non-finite constraint coefficient");
    }
    if (!std::isfinite(row.rhs)) throw InputError("non-finite constraint rhs");
  }
  if (!lp.var_bounds.empty() && lp.var_bounds.size() != n) {
    throw InputError("var_bounds size mismatch");
  }
  for (const VarBounds& b : lp.var_bounds) {
    if (std::isnan(b.lower) || std::isnan(b.upper)) throw InputError("NaN bound");
    if (b.lower == kInf || b.upper == -kInf) throw InputError("empty bound interval");
    if (b.lower > b.upper) throw InputError("lower bound exceeds upper bound");
  }
}

void pivot(Tableau& t, std::vector<double>& reduced, double& obj,
           std::size_t prow, std::size_t pcol) {
  const std::size_t w = t.cols + 1;
  double* pr = &t.a[prow * w];
  const double inv = 1.0 / pr[pcol];
  for (std::size_t j = 0; j < w; ++j) pr[j] *= inv;
  pr[pcol] = 1.0;

  for (std::size_t i = 0; i < t.rows; ++i) {
    if (i == prow) continue;
    double* ri = &t.a[i * w];
    const double factor = ri[pcol];
    if (factor == 0.0) continue;
    for (std::size_t j = 0; j < w; ++j) ri[j] -= factor * pr[j];
    ri[pcol] = 0.0;
  }

  const double rfactor = reduced[pcol];
  if (rfactor != 0.0) {
    for (std::size_t j = 0; j < t.cols; ++j) reduced[j] -= rfactor * pr[j];
    obj += rfactor * pr[t.cols];
    reduced[pcol] = 0.0;
  }
  t.basis[prow] = pcol;
}

enum class IterateResult { kOptimal, kUnbounded };

// Bland's rule: entering = smallest column index with negative reduced cost,
// leaving = ratio-test winner with ties broken by smallest basic index.
IterateResult iterate(Tableau& t, std::vector<double>& reduced, double& obj,
                      std::size_t allowed_cols, std::size_t iter_cap) {
  for (std::size_t iter = 0; iter < iter_cap; ++iter) {
    std::size_t entering = allowed_cols;
    for (std::size_t j = 0; j < allowed_cols; ++j) {
      if (reduced[j] < -kPivotEps) {
        entering = j;
        break;
      }
    }
    if (entering == allowed_cols) return IterateResult::kOptimal;

    std::size_t leaving = t.rows;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < t.rows; ++i) {
      const double aij = t.at(i, entering);
      if (aij <= kPivotEps) continue;
      const double ratio = t.rhs(i) / aij;
      if (leaving == t.rows || ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 && t.basis[i] < t.basis[leaving])) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    if (leaving == t.rows) return IterateResult::kUnbounded;
    pivot(t, reduced, obj, leaving, entering);
  }
  throw NumericalFailure("simplex iteration cap exceeded");
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  validate(lp);
  const std::size_t n_user = lp.n_vars();

  // Map user variables onto nonnegative columns.
  std::vector<VarMap> vmap(n_user);
  std::size_t n_cols = 0;
  std::vector<std::pair<std::size_t, double>> range_rows;  // (col, width) for l..u vars
  for (std::size_t j = 0; j < n_user; ++j) {
    VarBounds b = lp.var_bounds.empty() ? VarBounds{} : lp.var_bounds[j];
    if (b.lower > -kInf) {
      vmap[j] = {VarMap::kShiftLower, n_cols++, 0, b.lower};
      if (b.upper < kInf) range_rows.emplace_back(vmap[j].col, b.upper - b.lower);
    } else if (b.upper < kInf) {
      vmap[j] = {VarMap::kMirrorUpper, n_cols++, 0, b.upper};
    } else {
      vmap[j] = {VarMap::kSplitFree, n_cols, n_cols + 1, 0.0};
      n_cols += 2;
    }
  }
  const std::size_t n_struct = n_cols;

  // Substitute the mapping into each constraint, normalize rows by their
  // max-abs coefficient, and count slack columns.
  struct StdRow {
    std::vector<double> coeffs;  // over structural columns
    Relation rel;
    double rhs;
  };
  std::vector<StdRow> srows;
  srows.reserve(lp.constraints.size() + range_rows.size());
  for (const Constraint& row : lp.constraints) {
    StdRow sr{std::vector<double>(n_struct, 0.0), row.rel, row.rhs};
    double scale = 0.0;
    for (std::size_t j = 0; j < n_user; ++j) {
      const double c = row.coeffs[j];
      scale = std::max(scale, std::fabs(c));
      if (c == 0.0) continue;
      switch (vmap[j].kind) {
        case VarMap::kShiftLower:
          sr.coeffs[vmap[j].col] += c;
          sr.rhs -= c * vmap[j].offset;
          break;
        case VarMap::kMirrorUpper:
          sr.coeffs[vmap[j].col] -= c;
          sr.rhs -= c * vmap[j].offset;
          break;
        case VarMap::kSplitFree:
          sr.coeffs[vmap[j].col] += c;
          sr.coeffs[vmap[j].col_neg] -= c;
          break;
      }
    }
    if (scale > 0.0) {
      const double inv = 1.0 / scale;
      for (double& c : sr.coeffs) c *= inv;
      sr.rhs *= inv;
    }
    srows.push_back(std::move(sr));
  }
  for (const auto& [col, width] : range_rows) {
    StdRow sr{std::vector<double>(n_struct, 0.0), Relation::kLe, width};
    sr.coeffs[col] = 1.0;
    srows.push_back(std::move(sr));
  }

  std::size_t n_slack = 0;
  for (const StdRow& sr : srows) {
    if (sr.rel != Relation::kEq) ++n_slack;
  }

  const std::size_t m = srows.size();
  const std::size_t n_std = n_struct + n_slack;

  Tableau t;
  t.rows = m;
  t.cols = n_std + m;  // artificial column per row during phase 1
  t.a.assign(m * (t.cols + 1), 0.0);
  t.basis.resize(m);

  std::size_t slack_at = n_struct;
  for (std::size_t i = 0; i < m; ++i) {
    const StdRow& sr = srows[i];
    for (std::size_t j = 0; j < n_struct; ++j) t.at(i, j) = sr.coeffs[j];
    double rhs = sr.rhs;
    if (sr.rel == Relation::kLe) t.at(i, slack_at++) = 1.0;
    if (sr.rel == Relation::kGe) t.at(i, slack_at++) = -1.0;
    t.rhs(i) = rhs;
    if (rhs < 0.0) {
      const std::size_t w = t.cols + 1;
      for (std::size_t j = 0; j < w; ++j) t.a[i * w + j] = -t.a[i * w + j];
    }
    t.at(i, n_std + i) = 1.0;
    t.basis[i] = n_std + i;
  }

  const std::size_t iter_cap = 50 * (t.cols + t.rows) + 50;

  // Phase 1: minimize the sum of artificials.
  std::vector<double> reduced(t.cols, 0.0);
  double phase1_obj = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n_std; ++j) reduced[j] -= t.at(i, j);
    phase1_obj += t.rhs(i);
  }
  if (iterate(t, reduced, phase1_obj, n_std, iter_cap) == IterateResult::kUnbounded) {
    throw NumericalFailure("phase 1 reported unbounded");  // cannot happen: objective >= 0
  }
  if (phase1_obj > kTolFeas) {
    return LpSolution{LpStatus::kInfeasible, {}, 0.0};
  }

  // Drive any leftover artificials out of the basis; a row where that is
  // impossible is redundant and gets dropped.
  for (std::size_t i = 0; i < t.rows;) {
    if (t.basis[i] < n_std) {
      ++i;
      continue;
    }
    std::size_t pcol = n_std;
    for (std::size_t j = 0; j < n_std; ++j) {
      if (std::fabs(t.at(i, j)) > kPivotEps) {
        pcol = j;
        break;
      }
    }
    if (pcol < n_std) {
      pivot(t, reduced, phase1_obj, i, pcol);
      ++i;
    } else {
      const std::size_t w = t.cols + 1;
      t.a.erase(t.a.begin() + static_cast<std::ptrdiff_t>(i * w),
                t.a.begin() + static_cast<std::ptrdiff_t>((i + 1) * w));
      t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
      --t.rows;
    }
  }

  // Phase 2 objective over structural columns (slacks cost nothing). The
  // constant term from bound offsets is irrelevant to the pivoting.
  std::vector<double> cost(n_std, 0.0);
  for (std::size_t j = 0; j < n_user; ++j) {
    const double c = lp.objective[j];
    switch (vmap[j].kind) {
      case VarMap::kShiftLower:
        cost[vmap[j].col] += c;
        break;
      case VarMap::kMirrorUpper:
        cost[vmap[j].col] -= c;
        break;
      case VarMap::kSplitFree:
        cost[vmap[j].col] += c;
        cost[vmap[j].col_neg] -= c;
        break;
    }
  }
  std::vector<double> reduced2(t.cols, 0.0);
  for (std::size_t j = 0; j < n_std; ++j) reduced2[j] = cost[j];
  double obj2 = 0.0;
  for (std::size_t i = 0; i < t.rows; ++i) {
    const double cb = cost[t.basis[i]];
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j < n_std; ++j) reduced2[j] -= cb * t.at(i, j);
    obj2 += cb * t.rhs(i);
  }
  for (std::size_t i = 0; i < t.rows; ++i) reduced2[t.basis[i]] = 0.0;

  if (iterate(t, reduced2, obj2, n_std, iter_cap) == IterateResult::kUnbounded) {
    return LpSolution{LpStatus::kUnbounded, {}, 0.0};
  }

  std::vector<double> x_std(n_std, 0.0);
  for (std::size_t i = 0; i < t.rows; ++i) {
    if (t.basis[i] < n_std) x_std[t.basis[i]] = t.rhs(i);
  }

  LpSolution sol;
  sol.status = LpStatus::kOptimal;
  sol.x.resize(n_user);
  for (std::size_t j = 0; j < n_user; ++j) {
    switch (vmap[j].kind) {
      case VarMap::kShiftLower:
        sol.x[j] = vmap[j].offset + x_std[vmap[j].col];
        break;
      case VarMap::kMirrorUpper:
        sol.x[j] = vmap[j].offset - x_std[vmap[j].col];
        break;
      case VarMap::kSplitFree:
        sol.x[j] = x_std[vmap[j].col] - x_std[vmap[j].col_neg];
        break;
    }
  }
  double obj = 0.0;
  for (std::size_t j = 0; j < n_user; ++j) obj += lp.objective[j] * sol.x[j];
  sol.objective_value = obj;
  return sol;
}

}  // namespace linreg::lp
