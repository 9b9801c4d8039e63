#include "linreg/learn_lin_reg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "linreg/errors.hpp"

namespace linreg {
namespace {

std::size_t feature_dim(const std::vector<ModelRecord>& records) {
  if (records.empty()) throw InputError("need at least one record");
  const std::size_t k = records[0].q.size();
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].q.size() != k) {
      throw InputError("record " + std::to_string(i) +
                       " has inconsistent feature length");
    }
  }
  return k;
}

void check_box(const std::optional<BoxConstraint>& box, std::size_t k) {
  if (!box) return;
  if (box->lambda_min.size() != k || box->lambda_max.size() != k) {
    throw InputError("box dimension does not match feature length");
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (box->lambda_min[j] > box->lambda_max[j]) {
      throw InputError("box lower bound exceeds upper bound in dimension " +
                       std::to_string(j));
    }
  }
}

}  // namespace

std::vector<std::size_t> sorted_order(const std::vector<ModelRecord>& records) {
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (records[a].v != records[b].v) return records[a].v < records[b].v;
    return records[a].l_hat < records[b].l_hat;
  });
  return order;
}

lp::LinearProgram build_lp(const std::vector<ModelRecord>& sorted_records,
                           std::size_t i_star,
                           const std::optional<BoxConstraint>& box) {
  const std::size_t m = sorted_records.size();
  const std::size_t k = feature_dim(sorted_records);
  if (i_star >= m) throw InputError("i_star out of range");
  check_box(box, k);

  const std::size_t n = 1 + k + m;  // alpha, lambda, slacks
  lp::LinearProgram prog;
  prog.objective.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) prog.objective[1 + k + i] = 1.0;

  prog.var_bounds.assign(n, lp::VarBounds{});
  prog.var_bounds[0] = {0.0, lp::kInf};  // alpha
  for (std::size_t j = 0; j < k; ++j) {
    if (box) prog.var_bounds[1 + j] = {box->lambda_min[j], box->lambda_max[j]};
  }
  for (std::size_t i = 0; i < m; ++i) prog.var_bounds[1 + k + i] = {0.0, lp::kInf};

  const ModelRecord& star = sorted_records[i_star];
  for (std::size_t i = 0; i < m; ++i) {
    const ModelRecord& rec = sorted_records[i];

    // lambda.q_i + l_hat_i - alpha*v_i - slack_i = 0
    std::vector<double> eq(n, 0.0);
    eq[0] = -rec.v;
    for (std::size_t j = 0; j < k; ++j) eq[1 + j] = rec.q[j];
    eq[1 + k + i] = -1.0;
    prog.add_constraint(std::move(eq), lp::Relation::kEq, -rec.l_hat);

    // lambda.(q_{i*} - q_i) <= l_hat_i - l_hat_{i*}
    std::vector<double> le(n, 0.0);
    for (std::size_t j = 0; j < k; ++j) le[1 + j] = star.q[j] - rec.q[j];
    prog.add_constraint(std::move(le), lp::Relation::kLe, rec.l_hat - star.l_hat);
  }
  return prog;
}

LearnResult learn_lin_reg(const std::vector<ModelRecord>& records,
                          const std::optional<BoxConstraint>& box) {
  const std::size_t k = feature_dim(records);
  check_box(box, k);

  const std::vector<std::size_t> order = sorted_order(records);
  std::vector<ModelRecord> sorted;
  sorted.reserve(records.size());
  for (std::size_t idx : order) sorted.push_back(records[idx]);

  const std::size_t m = sorted.size();
  for (std::size_t i_star = 0; i_star < m; ++i_star) {
    const lp::LpSolution sol = lp::solve_lp(build_lp(sorted, i_star, box));
    if (sol.status == lp::LpStatus::kInfeasible) continue;
    if (sol.status == lp::LpStatus::kUnbounded) {
      // The objective is a sum of nonnegative variables; an unbounded report
      // can only be a numerical artifact.
      throw NumericalFailure("selection LP reported unbounded");
    }
    LearnResult res;
    res.weights.alpha = sol.x[0];
    res.weights.lambda.assign(sol.x.begin() + 1, sol.x.begin() + 1 + static_cast<std::ptrdiff_t>(k));
    res.i_star = i_star;
    res.i_star_id = sorted[i_star].id;
    res.slacks.assign(sol.x.begin() + 1 + static_cast<std::ptrdiff_t>(k), sol.x.end());
    res.total_slack = 0.0;
    for (double s : res.slacks) res.total_slack += s;
    res.alpha_degenerate = res.weights.alpha <= 1e-12;
    return res;
  }
  throw NoFeasibleRegularizer();
}

GridSearchResult brute_force_best_regularizer(
    const std::vector<ModelRecord>& records,
    const std::vector<std::vector<double>>& lambda_grid) {
  const std::size_t k = feature_dim(records);
  if (lambda_grid.empty()) throw InputError("lambda grid is empty");
  for (const auto& lam : lambda_grid) {
    if (lam.size() != k) throw InputError("grid lambda dimension mismatch");
  }

  GridSearchResult best;
  bool have_best = false;
  for (const auto& lam : lambda_grid) {
    RegWeights w{1.0, lam};
    std::size_t pick = 0;
    double pick_f = regularized_loss(records[0], w);
    for (std::size_t i = 1; i < records.size(); ++i) {
      const double f = regularized_loss(records[i], w);
      if (f < pick_f || (f == pick_f && records[i].v < records[pick].v)) {
        pick = i;
        pick_f = f;
      }
    }
    if (!have_best || records[pick].v < records[best.selected].v) {
      best.lambda = lam;
      best.selected = pick;
      have_best = true;
    }
  }
  return best;
}

}  // namespace linreg
