#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linreg/coins.hpp"
#include "linreg/learn_lin_reg.hpp"
#include "linreg/logreg.hpp"
#include "linreg/records.hpp"
#include "linreg/tune_reg.hpp"

namespace linreg {

std::vector<double> linspace(double lo, double hi, int points);
std::vector<double> geomspace(double lo, double hi, int points);

// Default hyperparameter ranges: 0.1..100 for the norm-type penalties and
// the coin penalty, 0..1 for label smoothing. The informed variants apply
// log scaling to the norm-type penalties and restrict label smoothing to
// 0..0.1.
SamplerSpec coins_sampler(bool informed);
SamplerSpec logreg_sampler(const std::vector<LogRegFeature>& trainable, bool informed);

// One row of the slack comparison table.
struct SlackTableRow {
  std::string regularizer;
  double max_slack = 0.0;
  double max_adjusted_slack = 0.0;
  double min_test_loss = 0.0;
  std::optional<double> max_accuracy;  // absent for coins

  RegWeights weights;              // the fitted bound
  std::vector<double> fit_slacks;  // LP slacks on the bound's own records

  // Slack metrics recomputed on the bound's own fit records. Unlike the
  // union-evaluated table values these are guaranteed by the fit itself.
  double fit_min_slack = 0.0;
  double fit_max_slack = 0.0;
  double fit_max_adjusted_slack = 0.0;
};

// Trains coins models along the scalar grid lambda * (1, 1) and fits a bound
// over the two log-loss features; maxima are over the grid's records.
SlackTableRow coins_slack_row(const std::shared_ptr<const CoinProblem>& prob,
                              const std::vector<double>& grid);

// Per regularizer: trains its grid, fits a single-feature bound on its own
// models, then reports slack maxima over the union of all trained models.
// min_test_loss and max_accuracy are over the regularizer's own models.
std::vector<SlackTableRow> logreg_slack_table(
    const std::shared_ptr<const LogRegProblem>& prob,
    const std::vector<LogRegFeature>& regularizers,
    const std::vector<std::vector<double>>& grids);

std::vector<double> default_grid(LogRegFeature reg, int points);

}  // namespace linreg
