#include "linreg/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include <json.hpp>

#include "linreg/errors.hpp"
#include "linreg/rng.hpp"

namespace linreg {
namespace {

double sample_normal(SplitMix64& rng) {
  const double u1 = rng.next_unit_open();
  const double u2 = rng.next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

// log(1 + exp(t)) without overflow.
double softplus(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

const LogRegDataset& pick_split(const LogRegProblem& prob, Split split) {
  switch (split) {
    case Split::kTrain: return prob.train;
    case Split::kValid: return prob.valid;
    case Split::kTest: return prob.test;
  }
  return prob.train;
}

double dot_row(const LogRegDataset& data, int row, const std::vector<double>& theta) {
  const double* x = &data.x[static_cast<std::size_t>(row) * theta.size()];
  double z = 0.0;
  for (std::size_t j = 0; j < theta.size(); ++j) z += x[j] * theta[j];
  return z;
}

LogRegDataset generate_split(const LogRegProblem& prob, int n, SplitMix64& rng) {
  const int d = prob.cfg.dim;
  LogRegDataset data;
  data.n = n;
  data.x.resize(static_cast<std::size_t>(n) * d);
  data.y.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int label = i % 2;  // exactly balanced
    data.y[static_cast<std::size_t>(i)] = label;
    const double sign = label == 1 ? 1.0 : -1.0;
    double* row = &data.x[static_cast<std::size_t>(i) * d];
    for (int j = 0; j < d; ++j) {
      row[j] = sign * prob.mu[static_cast<std::size_t>(j)] +
               prob.cfg.noise_sigma * sample_normal(rng);
    }
  }
  return data;
}

double train_loss_masked(const LogRegProblem& prob, const std::vector<double>& theta,
                         const std::uint8_t* mask) {
  const LogRegDataset& data = prob.train;
  const std::size_t d = theta.size();
  double sum = 0.0;
  for (int i = 0; i < data.n; ++i) {
    const double* x = &data.x[static_cast<std::size_t>(i) * d];
    double z = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (mask[j]) z += x[j] * theta[j];
    }
    sum += data.y[static_cast<std::size_t>(i)] == 1 ? softplus(-z) : softplus(z);
  }
  return sum / data.n;
}

}  // namespace

LogRegProblem logreg_generate(const LogRegConfig& cfg) {
  if (cfg.n_train < 10 || cfg.n_valid < 10 || cfg.n_test < 10) {
    throw InputError("each split needs at least 10 examples");
  }
  if (cfg.dim < 1) throw InputError("dim must be >= 1");
  if (!(cfg.noise_sigma > 0.0)) throw InputError("noise_sigma must be positive");
  if (cfg.n_dropout_masks < 1) throw InputError("need at least one dropout mask");

  LogRegProblem prob;
  prob.cfg = cfg;

  SplitMix64 mu_rng(derive_seed(cfg.seed, 10));
  prob.mu.resize(static_cast<std::size_t>(cfg.dim));
  double norm = 0.0;
  for (double& m : prob.mu) {
    m = sample_normal(mu_rng);
    norm += m * m;
  }
  norm = std::sqrt(norm);
  for (double& m : prob.mu) m *= cfg.mean_scale / norm;

  SplitMix64 train_rng(derive_seed(cfg.seed, 11));
  SplitMix64 valid_rng(derive_seed(cfg.seed, 12));
  SplitMix64 test_rng(derive_seed(cfg.seed, 13));
  prob.train = generate_split(prob, cfg.n_train, train_rng);
  prob.valid = generate_split(prob, cfg.n_valid, valid_rng);
  prob.test = generate_split(prob, cfg.n_test, test_rng);

  SplitMix64 mask_rng(derive_seed(cfg.seed, 14));
  prob.dropout_masks.resize(static_cast<std::size_t>(cfg.n_dropout_masks) * cfg.dim);
  for (std::uint8_t& keep : prob.dropout_masks) {
    keep = mask_rng.next_unit() < 0.5 ? 0 : 1;
  }
  return prob;
}

LogRegConfig logreg_config_from_json(const std::string& text) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("logreg config JSON: ") + e.what());
  }
  if (!obj.is_object()) throw InputError("logreg config JSON: expected an object");
  LogRegConfig cfg;
  try {
    cfg.n_train = obj.value("n_train", cfg.n_train);
    cfg.n_valid = obj.value("n_valid", cfg.n_valid);
    cfg.n_test = obj.value("n_test", cfg.n_test);
    cfg.dim = obj.value("dim", cfg.dim);
    cfg.mean_scale = obj.value("mean_scale", cfg.mean_scale);
    cfg.noise_sigma = obj.value("noise_sigma", cfg.noise_sigma);
    cfg.n_dropout_masks = obj.value("n_dropout_masks", cfg.n_dropout_masks);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("logreg config JSON: ") + e.what());
  }
  return cfg;
}

std::string logreg_to_json(const LogRegProblem& prob) {
  nlohmann::json obj;
  obj["version"] = 1;
  obj["config"] = {{"seed", prob.cfg.seed},       {"n_train", prob.cfg.n_train},
                   {"n_valid", prob.cfg.n_valid}, {"n_test", prob.cfg.n_test},
                   {"dim", prob.cfg.dim},         {"mean_scale", prob.cfg.mean_scale},
                   {"noise_sigma", prob.cfg.noise_sigma},
                   {"n_dropout_masks", prob.cfg.n_dropout_masks}};
  obj["mu"] = prob.mu;
  auto dataset = [](const LogRegDataset& d) {
    return nlohmann::json{{"n", d.n}, {"x", d.x}, {"y", d.y}};
  };
  obj["train"] = dataset(prob.train);
  obj["valid"] = dataset(prob.valid);
  obj["test"] = dataset(prob.test);
  obj["dropout_masks"] = prob.dropout_masks;
  return obj.dump();
}

LogRegProblem logreg_from_json(const std::string& text) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("logreg problem JSON: ") + e.what());
  }
  if (!obj.is_object() || obj.value("version", 0) != 1) {
    throw InputError("logreg problem JSON: unknown version");
  }
  LogRegProblem prob;
  try {
    const nlohmann::json& c = obj.at("config");
    prob.cfg.seed = c.at("seed").get<std::uint64_t>();
    prob.cfg.n_train = c.at("n_train").get<int>();
    prob.cfg.n_valid = c.at("n_valid").get<int>();
    prob.cfg.n_test = c.at("n_test").get<int>();
    prob.cfg.dim = c.at("dim").get<int>();
    prob.cfg.mean_scale = c.at("mean_scale").get<double>();
    prob.cfg.noise_sigma = c.at("noise_sigma").get<double>();
    prob.cfg.n_dropout_masks = c.at("n_dropout_masks").get<int>();
    prob.mu = obj.at("mu").get<std::vector<double>>();
    auto dataset = [](const nlohmann::json& d) {
      LogRegDataset out;
      out.n = d.at("n").get<int>();
      out.x = d.at("x").get<std::vector<double>>();
      out.y = d.at("y").get<std::vector<int>>();
      return out;
    };
    prob.train = dataset(obj.at("train"));
    prob.valid = dataset(obj.at("valid"));
    prob.test = dataset(obj.at("test"));
    prob.dropout_masks = obj.at("dropout_masks").get<std::vector<std::uint8_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("logreg problem JSON: ") + e.what());
  }
  return prob;
}

double logreg_loss(const LogRegProblem& prob, const std::vector<double>& theta,
                   Split split) {
  if (theta.size() != static_cast<std::size_t>(prob.cfg.dim)) {
    throw InputError("theta dimension mismatch");
  }
  const LogRegDataset& data = pick_split(prob, split);
  double sum = 0.0;
  for (int i = 0; i < data.n; ++i) {
    const double z = dot_row(data, i, theta);
    sum += data.y[static_cast<std::size_t>(i)] == 1 ? softplus(-z) : softplus(z);
  }
  return sum / data.n;
}

double logreg_accuracy(const LogRegProblem& prob, const std::vector<double>& theta,
                       Split split) {
  if (theta.size() != static_cast<std::size_t>(prob.cfg.dim)) {
    throw InputError("theta dimension mismatch");
  }
  const LogRegDataset& data = pick_split(prob, split);
  int correct = 0;
  for (int i = 0; i < data.n; ++i) {
    const int pred = dot_row(data, i, theta) > 0.0 ? 1 : 0;
    if (pred == data.y[static_cast<std::size_t>(i)]) ++correct;
  }
  return static_cast<double>(correct) / data.n;
}

std::vector<double> logreg_features(const LogRegProblem& prob,
                                    const std::vector<double>& theta) {
  if (theta.size() != static_cast<std::size_t>(prob.cfg.dim)) {
    throw InputError("theta dimension mismatch");
  }
  double l1 = 0.0;
  double l2 = 0.0;
  for (double t : theta) {
    l1 += std::fabs(t);
    l2 += t * t;
  }

  // Uniform-label training loss: each example scored against (1/2, 1/2).
  const LogRegDataset& data = prob.train;
  double ls = 0.0;
  for (int i = 0; i < data.n; ++i) {
    const double z = dot_row(data, i, theta);
    ls += 0.5 * softplus(-z) + 0.5 * softplus(z);
  }
  ls /= data.n;

  const double base = logreg_loss(prob, theta, Split::kTrain);
  const int d = prob.cfg.dim;
  double gap_sum = 0.0;
  for (int f = 0; f < prob.cfg.n_dropout_masks; ++f) {
    const std::uint8_t* mask = &prob.dropout_masks[static_cast<std::size_t>(f) * d];
    gap_sum += train_loss_masked(prob, theta, mask) - base;
  }
  const double r_do = gap_sum / prob.cfg.n_dropout_masks;

  return {l1, l2, ls, r_do};
}

ValueGrad logreg_smooth_objective(const LogRegProblem& prob,
                                  const std::vector<double>& theta, double l2,
                                  double ls) {
  if (theta.size() != static_cast<std::size_t>(prob.cfg.dim)) {
    throw InputError("theta dimension mismatch");
  }
  const LogRegDataset& data = prob.train;
  const std::size_t d = theta.size();
  ValueGrad out;
  out.grad.assign(d, 0.0);
  double value = 0.0;
  for (int i = 0; i < data.n; ++i) {
    const double* x = &data.x[static_cast<std::size_t>(i) * d];
    double z = 0.0;
    for (std::size_t j = 0; j < d; ++j) z += x[j] * theta[j];
    const int y = data.y[static_cast<std::size_t>(i)];
    const double p = sigmoid(z);
    value += y == 1 ? softplus(-z) : softplus(z);
    value += ls * (0.5 * softplus(-z) + 0.5 * softplus(z));
    const double coeff = (p - y) + ls * (p - 0.5);
    for (std::size_t j = 0; j < d; ++j) out.grad[j] += coeff * x[j];
  }
  const double inv_n = 1.0 / data.n;
  value *= inv_n;
  for (double& g : out.grad) g *= inv_n;

  for (std::size_t j = 0; j < d; ++j) {
    value += l2 * theta[j] * theta[j];
    out.grad[j] += 2.0 * l2 * theta[j];
  }
  out.value = value;
  return out;
}

std::vector<double> logreg_train(const LogRegProblem& prob, double l1, double l2,
                                 double ls) {
  if (!(l1 >= 0.0) || !(l2 >= 0.0) || !(ls >= 0.0)) {
    throw InputError("penalty weights must be nonnegative");
  }
  const LogRegDataset& data = prob.train;
  const std::size_t d = static_cast<std::size_t>(prob.cfg.dim);

  // Curvature bound for the smooth part (logistic terms curve at most 1/4):
  // L <= (1 + ls)/4 * mean |x|^2.
  double mean_sq = 0.0;
  for (double x : data.x) mean_sq += x * x;
  mean_sq /= data.n;
  const double lips = 0.25 * (1.0 + ls) * mean_sq;
  const double step = 1.0 / std::max(lips, 1e-12);

  std::vector<double> theta(d, 0.0);
  constexpr int kEpochs = 500;
  const double shrink = 1.0 / (1.0 + 2.0 * step * l2);
  const double threshold = step * l1;
  for (int epoch = 0; epoch < kEpochs; ++epoch) {
    const ValueGrad vg = logreg_smooth_objective(prob, theta, 0.0, ls);
    if (!std::isfinite(vg.value)) {
      throw TrainingFailure("non-finite loss during training");
    }
    for (std::size_t j = 0; j < d; ++j) {
      double v = theta[j] - step * vg.grad[j];
      // prox of step * (l1 |.|_1 + l2 |.|^2): soft-threshold then shrink
      if (v > threshold) {
        v -= threshold;
      } else if (v < -threshold) {
        v += threshold;
      } else {
        v = 0.0;
      }
      theta[j] = v * shrink;
    }
  }
  for (double t : theta) {
    if (!std::isfinite(t)) throw TrainingFailure("non-finite parameters after training");
  }
  return theta;
}

LogRegOracle::LogRegOracle(std::shared_ptr<const LogRegProblem> prob,
                           std::vector<LogRegFeature> trainable)
    : prob_(std::move(prob)), trainable_(std::move(trainable)) {
  if (!prob_) throw InputError("null logreg problem");
  if (trainable_.empty()) throw InputError("oracle needs at least one trainable feature");
  for (LogRegFeature f : trainable_) {
    if (f == LogRegFeature::kDropoutGap) {
      throw InputError("the dropout-gap feature is evaluation-only");
    }
  }
}

ModelRecord LogRegOracle::train(const std::vector<double>& lambda) {
  if (lambda.size() != trainable_.size()) {
    throw InputError("lambda dimension does not match trainable features");
  }
  double l1 = 0.0, l2 = 0.0, ls = 0.0;
  for (std::size_t j = 0; j < trainable_.size(); ++j) {
    switch (trainable_[j]) {
      case LogRegFeature::kL1: l1 = lambda[j]; break;
      case LogRegFeature::kL2: l2 = lambda[j]; break;
      case LogRegFeature::kLabelSmoothing: ls = lambda[j]; break;
      case LogRegFeature::kDropoutGap: break;
    }
  }
  const std::vector<double> theta = logreg_train(*prob_, l1, l2, ls);
  const std::vector<double> all = logreg_features(*prob_, theta);

  ModelRecord rec;
  std::string id = "logreg(";
  char buf[32];
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "%s%.12g", j ? "," : "", lambda[j]);
    id += buf;
  }
  rec.id = id + ")";
  rec.v = logreg_loss(*prob_, theta, Split::kValid);
  rec.l_hat = logreg_loss(*prob_, theta, Split::kTrain);
  for (LogRegFeature f : trainable_) rec.q.push_back(all[static_cast<std::size_t>(f)]);
  rec.test_loss = logreg_loss(*prob_, theta, Split::kTest);
  return rec;
}

LogRegOracle logreg_oracle(std::shared_ptr<const LogRegProblem> prob,
                           std::vector<LogRegFeature> trainable) {
  return LogRegOracle(std::move(prob), std::move(trainable));
}

}  // namespace linreg
