#include "linreg/records.hpp"

#include <cmath>
#include <string>

#include "linreg/errors.hpp"

namespace linreg {
namespace {

double loss_of(const ModelRecord& rec, LossField field) {
  if (field == LossField::kValidation) return rec.v;
  return *rec.test_loss;
}

void check_inputs(const std::vector<ModelRecord>& records, const RegWeights& w,
                  LossField field) {
  if (records.empty()) throw InputError("gap metrics need at least one record");
  const std::size_t k = w.lambda.size();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ModelRecord& rec = records[i];
    if (rec.q.size() != k) {
      throw InputError("record " + std::to_string(i) + " has feature length " +
                       std::to_string(rec.q.size()) + ", weights have " +
                       std::to_string(k));
    }
    if (!std::isfinite(rec.v) || !std::isfinite(rec.l_hat)) {
      throw InputError("record " + std::to_string(i) + " has non-finite losses");
    }
    if (field == LossField::kTest && !rec.test_loss.has_value()) {
      throw InputError("record " + std::to_string(i) +
                       " has no test_loss but test-based metrics were requested");
    }
  }
}

}  // namespace

double regularized_loss(const ModelRecord& rec, const RegWeights& w) {
  if (rec.q.size() != w.lambda.size()) {
    throw InputError("feature length " + std::to_string(rec.q.size()) +
                     " does not match weight length " + std::to_string(w.lambda.size()));
  }
  double f = rec.l_hat;
  for (std::size_t j = 0; j < rec.q.size(); ++j) f += w.lambda[j] * rec.q[j];
  return f;
}

std::vector<GapMetrics> gap_metrics(const std::vector<ModelRecord>& records,
                                    const RegWeights& w, LossField field) {
  check_inputs(records, w, field);
  const std::size_t m = records.size();

  std::vector<double> f(m);
  for (std::size_t i = 0; i < m; ++i) f[i] = regularized_loss(records[i], w);

  std::size_t arg = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (f[i] < f[arg]) {
      arg = i;
    } else if (f[i] == f[arg]) {
      const ModelRecord& a = records[i];
      const ModelRecord& b = records[arg];
      if (a.v < b.v || (a.v == b.v && a.l_hat < b.l_hat)) arg = i;
    }
  }

  const double f_hat = f[arg];
  const double slack_hat = f_hat - w.alpha * loss_of(records[arg], field);

  std::vector<GapMetrics> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    GapMetrics& g = out[i];
    g.slack = f[i] - w.alpha * loss_of(records[i], field);
    g.suboptimality = f[i] - f_hat;
    g.sas = g.slack - slack_hat - g.suboptimality;
  }
  return out;
}

double max_sas(const std::vector<ModelRecord>& records, const RegWeights& w,
               LossField field) {
  const std::vector<GapMetrics> gm = gap_metrics(records, w, field);
  double best = gm[0].sas;
  for (const GapMetrics& g : gm) best = std::max(best, g.sas);
  return best;
}

SlackSummary slack_summary(const std::vector<ModelRecord>& records,
                           const RegWeights& w, LossField field) {
  const std::vector<GapMetrics> gm = gap_metrics(records, w, field);
  SlackSummary s{gm[0].slack, gm[0].sas};
  for (const GapMetrics& g : gm) {
    s.max_slack = std::max(s.max_slack, g.slack);
    s.max_adjusted_slack = std::max(s.max_adjusted_slack, g.sas);
  }
  return s;
}

}  // namespace linreg
