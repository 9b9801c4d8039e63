#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "linreg/lp_solver.hpp"
#include "linreg/records.hpp"

namespace linreg {

struct LearnResult {
  RegWeights weights;
  std::size_t i_star = 0;       // index into the sorted record order
  std::string i_star_id;        // id of the selected record
  std::vector<double> slacks;   // per record, sorted order
  double total_slack = 0.0;
  bool alpha_degenerate = false;  // the bound's alpha landed at zero
};

// Order used throughout: ascending v, ties by ascending l_hat, then by
// original position. Returns the permutation (sorted -> original index).
std::vector<std::size_t> sorted_order(const std::vector<ModelRecord>& records);

// The selection LP for candidate i_star over sorted records. Variables are
// (alpha, lambda_1..lambda_k, slack_1..slack_m) in that order, with
// alpha >= 0, slack_i >= 0, lambda free unless a box is given:
//   minimize    sum_i slack_i
//   subject to  lambda.q_i + l_hat_i - alpha*v_i - slack_i = 0   for all i
//               lambda.(q_{i*} - q_i) <= l_hat_i - l_hat_{i*}    for all i
lp::LinearProgram build_lp(const std::vector<ModelRecord>& sorted_records,
                           std::size_t i_star,
                           const std::optional<BoxConstraint>& box = std::nullopt);

// Finds the weights whose induced regularized training loss selects the
// best-validation-loss record, tie-broken by minimum total slack. Tries
// candidates in ascending-v order and returns the first feasible LP's
// optimum. Throws NoFeasibleRegularizer if every candidate LP is infeasible.
LearnResult learn_lin_reg(const std::vector<ModelRecord>& records,
                          const std::optional<BoxConstraint>& box = std::nullopt);

// Grid-search oracle for the same selection problem: for each candidate
// lambda, pick the record minimizing l_hat + lambda.q (ties to lowest v),
// and return the first lambda whose selection has minimal v.
struct GridSearchResult {
  std::vector<double> lambda;
  std::size_t selected = 0;  // index into the records as given
};

GridSearchResult brute_force_best_regularizer(
    const std::vector<ModelRecord>& records,
    const std::vector<std::vector<double>>& lambda_grid);

}  // namespace linreg
