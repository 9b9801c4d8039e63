#include "lp_oracle.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace linreg::testing {
namespace {

using lp::LinearProgram;
using lp::LpStatus;
using lp::Relation;

constexpr double kFeasTol = 1e-7;

struct Hyperplane {
  std::vector<double> normal;
  double rhs;
};

// Gaussian elimination with partial pivoting; false if near-singular.
bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b,
                  std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    if (std::fabs(a[piv][col]) < 1e-10) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t ri = n; ri-- > 0;) {
    double s = b[ri];
    for (std::size_t c = ri + 1; c < n; ++c) s -= a[ri][c] * x[c];
    x[ri] = s / a[ri][ri];
  }
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

// Visits every size-n subset of the hyperplanes; returns true as soon as the
// callback accepts a candidate point (used for early exit on ray search).
template <typename Fn>
bool for_each_vertex(const std::vector<Hyperplane>& planes, std::size_t n, Fn&& accept) {
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  std::vector<double> b(n), x;

  const std::size_t total = planes.size();
  if (total < n) return false;
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = planes[idx[i]].normal;
      b[i] = planes[idx[i]].rhs;
    }
    if (solve_square(a, b, x)) {
      if (accept(x)) return true;
    }
    // next combination
    std::size_t i = n;
    while (i-- > 0) {
      if (idx[i] != i + total - n) {
        ++idx[i];
        for (std::size_t j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return false;
    }
  }
}

struct FeasibilityModel {
  std::vector<Hyperplane> planes;                 // candidate active sets
  std::vector<std::vector<double>> le_rows;       // a.x <= rhs form
  std::vector<double> le_rhs;
  std::vector<std::vector<double>> eq_rows;
  std::vector<double> eq_rhs;

  bool feasible(const std::vector<double>& x) const {
    for (std::size_t i = 0; i < le_rows.size(); ++i) {
      double v = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) v += le_rows[i][j] * x[j];
      if (v > le_rhs[i] + kFeasTol) return false;
    }
    for (std::size_t i = 0; i < eq_rows.size(); ++i) {
      double v = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) v += eq_rows[i][j] * x[j];
      if (std::fabs(v - eq_rhs[i]) > kFeasTol) return false;
    }
    return true;
  }
};

std::vector<double> unit_row(std::size_t n, std::size_t j, double sign) {
  std::vector<double> row(n, 0.0);
  row[j] = sign;
  return row;
}

}  // namespace

OracleResult oracle_solve(const LinearProgram& prog) {
  const std::size_t n = prog.n_vars();

  FeasibilityModel primal;
  for (const lp::Constraint& c : prog.constraints) {
    primal.planes.push_back({c.coeffs, c.rhs});
    switch (c.rel) {
      case Relation::kLe:
        primal.le_rows.push_back(c.coeffs);
        primal.le_rhs.push_back(c.rhs);
        break;
      case Relation::kGe: {
        std::vector<double> neg(c.coeffs);
        for (double& v : neg) v = -v;
        primal.le_rows.push_back(std::move(neg));
        primal.le_rhs.push_back(-c.rhs);
        break;
      }
      case Relation::kEq:
        primal.eq_rows.push_back(c.coeffs);
        primal.eq_rhs.push_back(c.rhs);
        break;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const lp::VarBounds b = prog.var_bounds.empty() ? lp::VarBounds{} : prog.var_bounds[j];
    if (b.lower > -lp::kInf) {
      primal.planes.push_back({unit_row(n, j, 1.0), b.lower});
      primal.le_rows.push_back(unit_row(n, j, -1.0));
      primal.le_rhs.push_back(-b.lower);
    }
    if (b.upper < lp::kInf) {
      primal.planes.push_back({unit_row(n, j, 1.0), b.upper});
      primal.le_rows.push_back(unit_row(n, j, 1.0));
      primal.le_rhs.push_back(b.upper);
    }
  }

  bool any_feasible = false;
  double best = 0.0;
  for_each_vertex(primal.planes, n, [&](const std::vector<double>& x) {
    if (!primal.feasible(x)) return false;
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) obj += prog.objective[j] * x[j];
    if (!any_feasible || obj < best) best = obj;
    any_feasible = true;
    return false;  // keep enumerating
  });
  if (!any_feasible) return {LpStatus::kInfeasible, 0.0};

  // Recession directions d with objective.d == -1: homogeneous versions of
  // every constraint, sign constraints from finite bounds, one slice plane.
  FeasibilityModel ray;
  for (const lp::Constraint& c : prog.constraints) {
    ray.planes.push_back({c.coeffs, 0.0});
    switch (c.rel) {
      case Relation::kLe:
        ray.le_rows.push_back(c.coeffs);
        ray.le_rhs.push_back(0.0);
        break;
      case Relation::kGe: {
        std::vector<double> neg(c.coeffs);
        for (double& v : neg) v = -v;
        ray.le_rows.push_back(std::move(neg));
        ray.le_rhs.push_back(0.0);
        break;
      }
      case Relation::kEq:
        ray.eq_rows.push_back(c.coeffs);
        ray.eq_rhs.push_back(0.0);
        break;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const lp::VarBounds b = prog.var_bounds.empty() ? lp::VarBounds{} : prog.var_bounds[j];
    bool planed = false;
    if (b.lower > -lp::kInf) {
      ray.le_rows.push_back(unit_row(n, j, -1.0));
      ray.le_rhs.push_back(0.0);
      planed = true;
    }
    if (b.upper < lp::kInf) {
      ray.le_rows.push_back(unit_row(n, j, 1.0));
      ray.le_rhs.push_back(0.0);
      planed = true;
    }
    if (planed) ray.planes.push_back({unit_row(n, j, 1.0), 0.0});
  }
  ray.planes.push_back({prog.objective, -1.0});
  ray.eq_rows.push_back(prog.objective);
  ray.eq_rhs.push_back(-1.0);

  const bool unbounded =
      for_each_vertex(ray.planes, n, [&](const std::vector<double>& d) {
        return ray.feasible(d);
      });
  if (unbounded) return {LpStatus::kUnbounded, 0.0};
  return {LpStatus::kOptimal, best};
}

LinearProgram random_lp(SplitMix64& rng) {
  const std::size_t n = 1 + rng.next_below(6);
  const std::size_t m = 1 + rng.next_below(10);

  LinearProgram prog;
  prog.objective.resize(n);
  for (double& c : prog.objective) c = rng.next_range(-3.0, 3.0);

  for (std::size_t i = 0; i < m; ++i) {
    lp::Constraint c;
    c.coeffs.resize(n);
    for (double& v : c.coeffs) {
      v = rng.next_unit() < 0.2 ? 0.0 : rng.next_range(-4.0, 4.0);
    }
    const double pick = rng.next_unit();
    if (pick < 0.6) {
      c.rel = Relation::kLe;
      c.rhs = rng.next_range(-1.0, 6.0);
    } else if (pick < 0.92) {
      c.rel = Relation::kGe;
      c.rhs = rng.next_range(-4.0, 2.5);
    } else {
      c.rel = Relation::kEq;
      c.rhs = rng.next_range(0.0, 3.0);
    }
    prog.constraints.push_back(std::move(c));
  }

  prog.var_bounds.assign(n, lp::VarBounds{0.0, lp::kInf});
  for (lp::VarBounds& b : prog.var_bounds) {
    if (rng.next_unit() < 0.2) b.upper = rng.next_range(0.5, 6.0);
  }
  return prog;
}

}  // namespace linreg::testing
