#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "linreg/records.hpp"
#include "linreg/tune_reg.hpp"

namespace linreg {

// Synthetic binary logistic regression: two isotropic Gaussian classes with
// means +mu and -mu, no intercept (the optimal boundary passes through the
// origin). Small enough to train thousands of times deterministically.
struct LogRegConfig {
  std::uint64_t seed = 0;
  int n_train = 160;
  int n_valid = 2000;
  int n_test = 4000;
  int dim = 8;
  double mean_scale = 0.9;   // |mu|; Bayes accuracy ~= Phi(mean_scale / sigma)
  double noise_sigma = 1.0;
  int n_dropout_masks = 1024;
};

struct LogRegDataset {
  std::vector<double> x;  // row-major, n * dim
  std::vector<int> y;     // 0/1, balanced
  int n = 0;
};

struct LogRegProblem {
  LogRegConfig cfg;
  std::vector<double> mu;
  LogRegDataset train, valid, test;
  std::vector<std::uint8_t> dropout_masks;  // n_masks * dim keep flags
};

LogRegProblem logreg_generate(const LogRegConfig& cfg);

// Accepts a JSON object with any subset of the config fields (seed excluded;
// callers pass it separately so one root seed drives everything).
LogRegConfig logreg_config_from_json(const std::string& text);

std::string logreg_to_json(const LogRegProblem& prob);
LogRegProblem logreg_from_json(const std::string& text);

enum class LogRegFeature : int {
  kL1 = 0,
  kL2 = 1,            // squared norm
  kLabelSmoothing = 2,
  kDropoutGap = 3,    // evaluation-only, never trained against
};

inline constexpr int kLogRegFeatureCount = 4;

// ( |theta|_1, |theta|_2^2, uniform-label training loss, mean over the fixed
// dropout masks of perturbed-minus-unperturbed training loss ).
std::vector<double> logreg_features(const LogRegProblem& prob,
                                    const std::vector<double>& theta);

enum class Split { kTrain, kValid, kTest };

double logreg_loss(const LogRegProblem& prob, const std::vector<double>& theta,
                   Split split);
double logreg_accuracy(const LogRegProblem& prob, const std::vector<double>& theta,
                       Split split);

// Value and gradient of the smooth penalized objective
//   l_hat + l2 * |theta|^2 + ls * uniform-label loss
// (the L1 term is handled proximally by the trainer, not here).
struct ValueGrad {
  double value = 0.0;
  std::vector<double> grad;
};

ValueGrad logreg_smooth_objective(const LogRegProblem& prob,
                                  const std::vector<double>& theta, double l2,
                                  double ls);

// Deterministic proximal gradient descent: 500 full-batch epochs from zero
// with a constant step set from a curvature bound on the smooth part. L1 and
// L2 enter through an exact proximal step.
std::vector<double> logreg_train(const LogRegProblem& prob, double l1, double l2,
                                 double ls);

// Oracle over a subset of the trainable features (L1, L2, label smoothing).
// The dropout-gap feature cannot be trained against. The record's feature
// vector is restricted to the selected features, so feature_dim == |subset|.
class LogRegOracle final : public TrainingOracle {
 public:
  LogRegOracle(std::shared_ptr<const LogRegProblem> prob,
               std::vector<LogRegFeature> trainable);

  std::size_t feature_dim() const override { return trainable_.size(); }
  ModelRecord train(const std::vector<double>& lambda) override;

 private:
  std::shared_ptr<const LogRegProblem> prob_;
  std::vector<LogRegFeature> trainable_;
};

LogRegOracle logreg_oracle(std::shared_ptr<const LogRegProblem> prob,
                           std::vector<LogRegFeature> trainable);

}  // namespace linreg
