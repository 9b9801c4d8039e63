#include "linreg/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "linreg/errors.hpp"

namespace linreg {

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 1) throw InputError("grid needs at least one point");
  if (points == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  }
  return out;
}

std::vector<double> geomspace(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo)) throw InputError("geomspace needs 0 < lo < hi");
  if (points < 1) throw InputError("grid needs at least one point");
  if (points == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(points));
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  for (int i = 0; i < points; ++i) {
    out[static_cast<std::size_t>(i)] = std::exp(log_lo + (log_hi - log_lo) * i / (points - 1));
  }
  return out;
}

SamplerSpec coins_sampler(bool informed) {
  const Scale scale = informed ? Scale::kLogUniform : Scale::kUniform;
  return SamplerSpec{{{0.1, 100.0, scale}, {0.1, 100.0, scale}}};
}

SamplerSpec logreg_sampler(const std::vector<LogRegFeature>& trainable, bool informed) {
  SamplerSpec spec;
  for (LogRegFeature f : trainable) {
    switch (f) {
      case LogRegFeature::kL1:
      case LogRegFeature::kL2:
        spec.dims.push_back({0.1, 100.0, informed ? Scale::kLogUniform : Scale::kUniform});
        break;
      case LogRegFeature::kLabelSmoothing:
        spec.dims.push_back({0.0, informed ? 0.1 : 1.0, Scale::kUniform});
        break;
      case LogRegFeature::kDropoutGap:
        throw InputError("the dropout-gap feature is evaluation-only");
    }
  }
  return spec;
}

std::vector<double> default_grid(LogRegFeature reg, int points) {
  if (reg == LogRegFeature::kLabelSmoothing) return linspace(0.0, 1.0, points);
  return geomspace(0.1, 100.0, points);
}

namespace {

void fill_fit_diagnostics(SlackTableRow& row, const std::vector<ModelRecord>& own) {
  const std::vector<GapMetrics> gm = gap_metrics(own, row.weights, LossField::kValidation);
  row.fit_min_slack = gm[0].slack;
  row.fit_max_slack = gm[0].slack;
  row.fit_max_adjusted_slack = gm[0].sas;
  for (const GapMetrics& g : gm) {
    row.fit_min_slack = std::min(row.fit_min_slack, g.slack);
    row.fit_max_slack = std::max(row.fit_max_slack, g.slack);
    row.fit_max_adjusted_slack = std::max(row.fit_max_adjusted_slack, g.sas);
  }
}

}  // namespace

SlackTableRow coins_slack_row(const std::shared_ptr<const CoinProblem>& prob,
                              const std::vector<double>& grid) {
  if (grid.empty()) throw InputError("empty grid");
  CoinsOracle oracle(prob);
  std::vector<ModelRecord> records;
  records.reserve(grid.size());
  for (double lam : grid) {
    records.push_back(oracle.train({lam, lam}));
  }
  const LearnResult fit = learn_lin_reg(records);
  const SlackSummary summary = slack_summary(records, fit.weights, LossField::kValidation);

  SlackTableRow row;
  row.regularizer = "logitbeta";
  row.max_slack = summary.max_slack;
  row.max_adjusted_slack = summary.max_adjusted_slack;
  row.min_test_loss = records[0].test_loss.value();
  for (const ModelRecord& rec : records) {
    row.min_test_loss = std::min(row.min_test_loss, rec.test_loss.value());
  }
  row.weights = fit.weights;
  row.fit_slacks = fit.slacks;
  fill_fit_diagnostics(row, records);
  return row;
}

namespace {

const char* feature_name(LogRegFeature f) {
  switch (f) {
    case LogRegFeature::kL1: return "l1";
    case LogRegFeature::kL2: return "l2";
    case LogRegFeature::kLabelSmoothing: return "label_smoothing";
    case LogRegFeature::kDropoutGap: return "dropout_gap";
  }
  return "?";
}

struct TrainedModel {
  double v = 0.0;
  double l_hat = 0.0;
  double test_loss = 0.0;
  double accuracy = 0.0;
  std::vector<double> features;
};

}  // namespace

std::vector<SlackTableRow> logreg_slack_table(
    const std::shared_ptr<const LogRegProblem>& prob,
    const std::vector<LogRegFeature>& regularizers,
    const std::vector<std::vector<double>>& grids) {
  if (!prob) throw InputError("null logreg problem");
  if (regularizers.empty()) throw InputError("no regularizers requested");
  if (grids.size() != regularizers.size()) {
    throw InputError("need one grid per regularizer");
  }

  // Train every grid up front; each bound is later evaluated on the union.
  std::vector<std::vector<TrainedModel>> trained(regularizers.size());
  for (std::size_t r = 0; r < regularizers.size(); ++r) {
    const LogRegFeature reg = regularizers[r];
    if (reg == LogRegFeature::kDropoutGap) {
      throw InputError("the dropout-gap feature is evaluation-only");
    }
    if (grids[r].empty()) throw InputError("empty grid");
    for (double lam : grids[r]) {
      const double l1 = reg == LogRegFeature::kL1 ? lam : 0.0;
      const double l2 = reg == LogRegFeature::kL2 ? lam : 0.0;
      const double ls = reg == LogRegFeature::kLabelSmoothing ? lam : 0.0;
      const std::vector<double> theta = logreg_train(*prob, l1, l2, ls);
      TrainedModel tm;
      tm.v = logreg_loss(*prob, theta, Split::kValid);
      tm.l_hat = logreg_loss(*prob, theta, Split::kTrain);
      tm.test_loss = logreg_loss(*prob, theta, Split::kTest);
      tm.accuracy = logreg_accuracy(*prob, theta, Split::kTest);
      tm.features = logreg_features(*prob, theta);
      trained[r].push_back(std::move(tm));
    }
  }

  auto as_record = [](const TrainedModel& tm, LogRegFeature feature) {
    ModelRecord rec;
    rec.v = tm.v;
    rec.l_hat = tm.l_hat;
    rec.q = {tm.features[static_cast<std::size_t>(feature)]};
    rec.test_loss = tm.test_loss;
    return rec;
  };

  std::vector<SlackTableRow> rows;
  for (std::size_t r = 0; r < regularizers.size(); ++r) {
    const LogRegFeature reg = regularizers[r];

    std::vector<ModelRecord> own;
    for (const TrainedModel& tm : trained[r]) own.push_back(as_record(tm, reg));
    const LearnResult fit = learn_lin_reg(own);

    std::vector<ModelRecord> all;
    for (const auto& group : trained) {
      for (const TrainedModel& tm : group) all.push_back(as_record(tm, reg));
    }
    const SlackSummary summary = slack_summary(all, fit.weights, LossField::kValidation);

    SlackTableRow row;
    row.regularizer = feature_name(reg);
    row.max_slack = summary.max_slack;
    row.max_adjusted_slack = summary.max_adjusted_slack;
    row.min_test_loss = trained[r][0].test_loss;
    double best_acc = trained[r][0].accuracy;
    for (const TrainedModel& tm : trained[r]) {
      row.min_test_loss = std::min(row.min_test_loss, tm.test_loss);
      best_acc = std::max(best_acc, tm.accuracy);
    }
    row.max_accuracy = best_acc;
    row.weights = fit.weights;
    row.fit_slacks = fit.slacks;
    fill_fit_diagnostics(row, own);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace linreg
