#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "linreg/errors.hpp"
#include "linreg/learn_lin_reg.hpp"
#include "test_util.hpp"

using namespace linreg;

namespace {

ModelRecord make(std::string id, double v, double l_hat, std::vector<double> q) {
  ModelRecord rec;
  rec.id = std::move(id);
  rec.v = v;
  rec.l_hat = l_hat;
  rec.q = std::move(q);
  return rec;
}

std::vector<ModelRecord> two_record_example() {
  return {make("a", 1.0, 0.6, {0.2}), make("b", 2.0, 0.4, {0.8})};
}

}  // namespace

TEST_CASE("selection LP shape for the smallest instance") {
  const std::vector<ModelRecord> recs = {make("a", 1.0, 0.5, {0.3})};
  const lp::LinearProgram prog = build_lp(recs, 0);
  CHECK(prog.n_vars() == 3);  // alpha, lambda, one slack
  REQUIRE(prog.constraints.size() == 2);
  CHECK(prog.constraints[0].rel == lp::Relation::kEq);
  CHECK(prog.constraints[1].rel == lp::Relation::kLe);
  // the self-comparison row is vacuous
  for (double c : prog.constraints[1].coeffs) CHECK(c == 0.0);
  CHECK(prog.constraints[1].rhs == 0.0);
  CHECK(prog.var_bounds[0].lower == 0.0);           // alpha >= 0
  CHECK(prog.var_bounds[1].lower == -lp::kInf);     // lambda free
  CHECK(prog.var_bounds[2].lower == 0.0);           // slack >= 0

  CHECK_THROWS_AS(build_lp(recs, 1), InputError);
}

TEST_CASE("two records pin the weights exactly") {
  const LearnResult res = learn_lin_reg(two_record_example());
  CHECK(res.weights.alpha == doctest::Approx(1.0).epsilon(1e-9));
  REQUIRE(res.weights.lambda.size() == 1);
  CHECK(res.weights.lambda[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(res.i_star == 0);
  CHECK(res.i_star_id == "a");
  CHECK(res.total_slack == doctest::Approx(0.0).epsilon(1e-10));
  CHECK_FALSE(res.alpha_degenerate);
}

TEST_CASE("single record is always feasible with zero slack") {
  const LearnResult res = learn_lin_reg({make("only", 0.9, 0.2, {0.7})});
  CHECK(res.i_star == 0);
  CHECK(res.total_slack == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("a pinned box reduces to fitting alpha alone") {
  auto recs = two_record_example();
  BoxConstraint box{{0.0}, {0.0}};
  const LearnResult res = learn_lin_reg(recs, box);
  CHECK(res.weights.lambda[0] == doctest::Approx(0.0));
  // with lambda = 0, f = l_hat, so the argmin of f is record b; the LP for
  // record a (lower v) is infeasible and the loop moves on.
  CHECK(res.i_star_id == "b");
  for (double s : res.slacks) CHECK(s >= -lp::kTolFeas);
}

TEST_CASE("result invariants hold on random instances") {
  SplitMix64 rng(321);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = 1 + rng.next_below(10);
    const std::size_t k = 1 + rng.next_below(3);
    const auto recs = testing::random_records(rng, m, k, false);
    const LearnResult res = learn_lin_reg(recs);

    REQUIRE(res.slacks.size() == m);
    double total = 0.0;
    for (double s : res.slacks) {
      CHECK(s >= -lp::kTolFeas);
      total += s;
    }
    CHECK(res.total_slack == doctest::Approx(total).epsilon(1e-9));

    const auto order = sorted_order(recs);
    std::vector<ModelRecord> sorted;
    for (std::size_t idx : order) sorted.push_back(recs[idx]);
    const double f_star = regularized_loss(sorted[res.i_star], res.weights);
    for (const ModelRecord& rec : sorted) {
      CHECK(f_star <= regularized_loss(rec, res.weights) + lp::kTolFeas);
    }
  }
}

TEST_CASE("hidden weights are recovered from minimal record sets") {
  SplitMix64 rng(555);
  for (std::size_t k = 1; k <= 3; ++k) {
    for (int trial = 0; trial < 25; ++trial) {
      const auto inst = testing::perfect_instance(rng, k);
      const LearnResult res = learn_lin_reg(inst.records);
      CHECK(std::fabs(res.weights.alpha - inst.alpha) <= 1e-6 * std::fabs(inst.alpha));
      for (std::size_t j = 0; j < k; ++j) {
        CHECK(std::fabs(res.weights.lambda[j] - inst.lambda[j]) <=
              1e-6 * std::fabs(inst.lambda[j]));
      }
      for (double s : res.slacks) CHECK(std::fabs(s) <= 1e-8);
    }
  }
}

TEST_CASE("grid oracle walk-through") {
  const auto recs = two_record_example();
  const std::vector<std::vector<double>> grid = {{0.0}, {1.0}, {2.0}, {3.0}};
  const GridSearchResult res = brute_force_best_regularizer(recs, grid);
  // lambda 0 selects record b (v = 2); lambda 1 is the first to select a.
  CHECK(res.lambda == std::vector<double>{1.0});
  CHECK(res.selected == 0);

  const GridSearchResult single =
      brute_force_best_regularizer(recs, {{5.0}});
  CHECK(single.lambda == std::vector<double>{5.0});

  CHECK_THROWS_AS(brute_force_best_regularizer(recs, {}), InputError);
}

TEST_CASE("fitted selection is at least as good as any grid choice") {
  SplitMix64 rng(808);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 2 + rng.next_below(11);
    const std::size_t k = 1 + rng.next_below(3);
    const auto recs = testing::random_records(rng, m, k, false);

    std::vector<std::vector<double>> grid;
    for (int g = 0; g < 600; ++g) {
      std::vector<double> lam(k);
      for (double& l : lam) l = rng.next_range(0.0, 3.0);
      grid.push_back(std::move(lam));
    }

    const LearnResult fit = learn_lin_reg(recs);
    const GridSearchResult ref = brute_force_best_regularizer(recs, grid);
    const auto order = sorted_order(recs);
    CHECK(recs[order[fit.i_star]].v <= recs[ref.selected].v + 1e-9);
  }
}

TEST_CASE("the returned candidate is the first feasible one") {
  // With lambda boxed into [0, 1] and these features, record a (lowest v)
  // can never be the argmin of f, so the loop must land on record b.
  std::vector<ModelRecord> recs = {make("a", 1.0, 1.0, {0.5}), make("b", 2.0, 0.2, {0.2})};
  BoxConstraint box{{0.0}, {1.0}};
  const LearnResult res = learn_lin_reg(recs, box);
  CHECK(res.i_star == 1);
  CHECK(res.i_star_id == "b");
  CHECK(res.weights.lambda[0] >= -lp::kTolFeas);
  CHECK(res.weights.lambda[0] <= 1.0 + lp::kTolFeas);
}

TEST_CASE("no candidate admits a bound") {
  // A negative training loss forces every slack constraint below zero for
  // any alpha >= 0 once lambda is pinned to zero.
  std::vector<ModelRecord> recs = {make("a", 1.0, -1.0, {1.0}), make("b", 2.0, 1.0, {1.0})};
  BoxConstraint box{{0.0}, {0.0}};
  CHECK_THROWS_AS(learn_lin_reg(recs, box), NoFeasibleRegularizer);
}

TEST_CASE("v ties break by training loss then input order") {
  std::vector<ModelRecord> recs = {make("hi", 1.0, 0.9, {0.1}), make("lo", 1.0, 0.2, {0.1}),
                                   make("dup", 1.0, 0.2, {0.1})};
  const auto order = sorted_order(recs);
  CHECK(recs[order[0]].id == "lo");
  CHECK(recs[order[1]].id == "dup");
  CHECK(recs[order[2]].id == "hi");
}

TEST_CASE("degenerate alpha is flagged") {
  // A negative validation loss makes any alpha > 0 unhelpful: the objective
  // pushes alpha to its lower bound.
  std::vector<ModelRecord> recs = {make("neg", -1.0, 0.5, {1.0})};
  const LearnResult res = learn_lin_reg(recs);
  CHECK(res.alpha_degenerate == (res.weights.alpha <= 1e-12));
  CHECK(res.weights.alpha >= 0.0);
}
