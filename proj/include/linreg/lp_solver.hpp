#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace linreg::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Absolute tolerance on constraint violation and on the phase-1 residual.
// Inputs to this solver are losses and loss-like features of order
// 1e-3..1e2, so an absolute tolerance is appropriate.
inline constexpr double kTolFeas = 1e-7;

enum class Relation { kLe, kGe, kEq };

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct Constraint {
  std::vector<double> coeffs;
  Relation rel = Relation::kLe;
  double rhs = 0.0;
};

struct VarBounds {
  double lower = -kInf;
  double upper = kInf;
};

// Dense LP in "minimize" orientation. var_bounds may be left empty, in which
// case every variable is free; otherwise it must have one entry per variable.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<Constraint> constraints;
  std::vector<VarBounds> var_bounds;

  std::size_t n_vars() const { return objective.size(); }

  void add_constraint(std::vector<double> coeffs, Relation rel, double rhs) {
    constraints.push_back({std::move(coeffs), rel, rhs});
  }
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;          // populated iff status == kOptimal
  double objective_value = 0.0;   // valid iff status == kOptimal
};

// Two-phase dense simplex with Bland's anti-cycling pivot rule. Free
// variables are split into nonnegative difference pairs internally; each
// constraint row is normalized by its max-abs coefficient before solving.
//
// Throws InputError for malformed programs and NumericalFailure if the
// iteration cap (50 * (vars + rows) per phase) is exceeded; an iteration-cap
// hit is never reported as an ordinary status.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace linreg::lp
