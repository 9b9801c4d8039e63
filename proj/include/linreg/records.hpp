#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace linreg {

// One trained model, reduced to the numbers the selection machinery needs:
// validation loss, training loss, and the regularization feature vector.
// test_loss is present only when the problem permits computing it exactly.
struct ModelRecord {
  std::string id;
  double v = 0.0;
  double l_hat = 0.0;
  std::vector<double> q;
  std::optional<double> test_loss;
};

// Weights of a learned bound f(theta) = l_hat + lambda.q >= alpha * loss.
struct RegWeights {
  double alpha = 1.0;
  std::vector<double> lambda;
};

struct GapMetrics {
  double slack = 0.0;          // f - alpha * loss
  double suboptimality = 0.0;  // f - min f over the record set
  double sas = 0.0;            // slack - slack(argmin f) - suboptimality
};

// Per-dimension interval constraints on lambda. +-infinity means unbounded.
struct BoxConstraint {
  std::vector<double> lambda_min;
  std::vector<double> lambda_max;

  std::size_t dim() const { return lambda_min.size(); }
};

enum class LossField { kValidation, kTest };

// l_hat + lambda.q. alpha plays no role here.
double regularized_loss(const ModelRecord& rec, const RegWeights& w);

// Computes slack, suboptimality, and adjusted slack for every record against
// the record minimizing f = l_hat + lambda.q. Ties in the argmin go to the
// record that sorts first by (v, l_hat, input position). Slack is measured
// against alpha-weighted loss so it matches the learned bound's residuals.
std::vector<GapMetrics> gap_metrics(const std::vector<ModelRecord>& records,
                                    const RegWeights& w, LossField field);

// max over records of adjusted slack. Over a finite record set with
// alpha = 1 this equals loss(argmin f) - min loss exactly.
double max_sas(const std::vector<ModelRecord>& records, const RegWeights& w,
               LossField field);

struct SlackSummary {
  double max_slack = 0.0;
  double max_adjusted_slack = 0.0;
};

SlackSummary slack_summary(const std::vector<ModelRecord>& records,
                           const RegWeights& w, LossField field);

}  // namespace linreg
