#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "linreg/errors.hpp"
#include "linreg/lp_solver.hpp"
#include "lp_oracle.hpp"

using namespace linreg;
using lp::LinearProgram;
using lp::LpSolution;
using lp::LpStatus;
using lp::Relation;

TEST_CASE("one-variable vertex") {
  LinearProgram prog;
  prog.objective = {-1.0};
  prog.add_constraint({1.0}, Relation::kLe, 5.0);
  prog.var_bounds = {{0.0, lp::kInf}};

  const LpSolution sol = lp::solve_lp(prog);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.x[0] == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(sol.objective_value == doctest::Approx(-5.0).epsilon(1e-9));
}

TEST_CASE("empty feasible set") {
  LinearProgram prog;
  prog.objective = {0.0};
  prog.add_constraint({1.0}, Relation::kGe, 1.0);
  prog.add_constraint({1.0}, Relation::kLe, 0.0);

  CHECK(lp::solve_lp(prog).status == LpStatus::kInfeasible);
}

TEST_CASE("unbounded descent") {
  LinearProgram prog;
  prog.objective = {-1.0};
  prog.var_bounds = {{0.0, lp::kInf}};
  CHECK(lp::solve_lp(prog).status == LpStatus::kUnbounded);
}

TEST_CASE("free variable reaches a negative optimum") {
  LinearProgram prog;
  prog.objective = {1.0};
  prog.add_constraint({1.0}, Relation::kGe, -3.0);

  const LpSolution sol = lp::solve_lp(prog);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.x[0] == doctest::Approx(-3.0).epsilon(1e-9));
}

TEST_CASE("equality constraints and mixed bounds") {
  // min x + 3z  s.t.  x + y = 2,  y + z >= 1,  x in [0, 1.5], y >= 0, z free
  LinearProgram prog;
  prog.objective = {1.0, 0.0, 3.0};
  prog.add_constraint({1.0, 1.0, 0.0}, Relation::kEq, 2.0);
  prog.add_constraint({0.0, 1.0, 1.0}, Relation::kGe, 1.0);
  prog.var_bounds = {{0.0, 1.5}, {0.0, lp::kInf}, {-lp::kInf, lp::kInf}};

  const LpSolution sol = lp::solve_lp(prog);
  REQUIRE(sol.status == LpStatus::kOptimal);
  // x = 0, y = 2 satisfies everything; z can fall to the second constraint's
  // boundary 1 - y = -1, giving objective -3.
  CHECK(sol.objective_value == doctest::Approx(-3.0).epsilon(1e-9));
}

TEST_CASE("degenerate ties do not cycle") {
  // Multiple constraints active at the optimum corner.
  LinearProgram prog;
  prog.objective = {-1.0, -1.0};
  prog.add_constraint({1.0, 0.0}, Relation::kLe, 1.0);
  prog.add_constraint({0.0, 1.0}, Relation::kLe, 1.0);
  prog.add_constraint({1.0, 1.0}, Relation::kLe, 2.0);
  prog.add_constraint({1.0, -1.0}, Relation::kLe, 0.0);
  prog.var_bounds = {{0.0, lp::kInf}, {0.0, lp::kInf}};

  const LpSolution sol = lp::solve_lp(prog);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.objective_value == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("malformed rows are rejected") {
  LinearProgram prog;
  prog.objective = {1.0, 2.0};
  prog.add_constraint({1.0}, Relation::kLe, 1.0);  // wrong length
  CHECK_THROWS_AS(lp::solve_lp(prog), InputError);

  LinearProgram bad_bounds;
  bad_bounds.objective = {1.0};
  bad_bounds.var_bounds = {{2.0, 1.0}};
  CHECK_THROWS_AS(lp::solve_lp(bad_bounds), InputError);

  LinearProgram empty;
  CHECK_THROWS_AS(lp::solve_lp(empty), InputError);
}

TEST_CASE("determinism across repeated calls") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const LinearProgram prog = testing::random_lp(rng);
    const LpSolution a = lp::solve_lp(prog);
    const LpSolution b = lp::solve_lp(prog);
    CHECK(a.status == b.status);
    if (a.status == LpStatus::kOptimal) {
      CHECK(a.objective_value == b.objective_value);
      CHECK(a.x == b.x);
    }
  }
}

TEST_CASE("optimal solutions are feasible within tolerance") {
  SplitMix64 rng(11);
  int optimal_seen = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const LinearProgram prog = testing::random_lp(rng);
    const LpSolution sol = lp::solve_lp(prog);
    if (sol.status != LpStatus::kOptimal) continue;
    ++optimal_seen;
    for (const lp::Constraint& c : prog.constraints) {
      double v = 0.0;
      for (std::size_t j = 0; j < c.coeffs.size(); ++j) v += c.coeffs[j] * sol.x[j];
      const double scale = [&] {
        double s = 0.0;
        for (double x : c.coeffs) s = std::max(s, std::fabs(x));
        return s > 0.0 ? s : 1.0;
      }();
      if (c.rel == Relation::kLe) CHECK(v <= c.rhs + lp::kTolFeas * scale * 10);
      if (c.rel == Relation::kGe) CHECK(v >= c.rhs - lp::kTolFeas * scale * 10);
      if (c.rel == Relation::kEq) CHECK(std::fabs(v - c.rhs) <= lp::kTolFeas * scale * 10);
    }
    for (std::size_t j = 0; j < prog.n_vars(); ++j) {
      CHECK(sol.x[j] >= prog.var_bounds[j].lower - lp::kTolFeas * 10);
      CHECK(sol.x[j] <= prog.var_bounds[j].upper + lp::kTolFeas * 10);
    }
  }
  CHECK(optimal_seen > 20);
}

TEST_CASE("statuses and optima match the enumeration oracle") {
  SplitMix64 rng(2024);
  int counts[3] = {0, 0, 0};
  for (int trial = 0; trial < 150; ++trial) {
    const LinearProgram prog = testing::random_lp(rng);
    const LpSolution sol = lp::solve_lp(prog);
    const testing::OracleResult ref = testing::oracle_solve(prog);
    INFO("trial ", trial);
    REQUIRE(sol.status == ref.status);
    ++counts[static_cast<int>(sol.status)];
    if (sol.status == LpStatus::kOptimal) {
      CHECK(std::fabs(sol.objective_value - ref.objective) <= 1e-8);
    }
  }
  // the generator must exercise all three statuses
  CHECK(counts[0] > 0);
  CHECK(counts[1] > 0);
  CHECK(counts[2] > 0);
}

TEST_CASE("optimum lower-bounds independently sampled feasible points") {
  SplitMix64 rng(99);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 40; ++trial) {
    const LinearProgram prog = testing::random_lp(rng);
    const LpSolution sol = lp::solve_lp(prog);
    if (sol.status != LpStatus::kOptimal) continue;

    // Rejection-sample feasible points near the reported solution.
    for (int attempt = 0; attempt < 200; ++attempt) {
      std::vector<double> p(prog.n_vars());
      for (std::size_t j = 0; j < p.size(); ++j) {
        p[j] = std::max(0.0, sol.x[j] + rng.next_range(-0.5, 0.5));
        p[j] = std::min(p[j], prog.var_bounds[j].upper);
      }
      bool ok = true;
      for (const lp::Constraint& c : prog.constraints) {
        double v = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) v += c.coeffs[j] * p[j];
        if (c.rel == Relation::kLe && v > c.rhs) ok = false;
        if (c.rel == Relation::kGe && v < c.rhs) ok = false;
        if (c.rel == Relation::kEq && std::fabs(v - c.rhs) > 1e-12) ok = false;
      }
      if (!ok) continue;
      double obj = 0.0;
      for (std::size_t j = 0; j < p.size(); ++j) obj += prog.objective[j] * p[j];
      CHECK(obj >= sol.objective_value - lp::kTolFeas);
      ++checked;
      break;
    }
  }
  CHECK(checked >= 20);
}
