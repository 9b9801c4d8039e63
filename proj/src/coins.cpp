#include "linreg/coins.hpp"

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

// Marsaglia-Tsang; the a < 1 case boosts through Gamma(a + 1).
double sample_gamma(SplitMix64& rng, double a) {
  if (a < 1.0) {
    const double u = rng.next_unit_open();
    return sample_gamma(rng, a + 1.0) * std::pow(u, 1.0 / a);
  }
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = sample_normal(rng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.next_unit_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_beta(SplitMix64& rng, double a, double b) {
  const double ga = sample_gamma(rng, a);
  const double gb = sample_gamma(rng, b);
  return ga / (ga + gb);
}

double clamp_unit(double p) {
  return std::min(1.0 - kThetaClamp, std::max(kThetaClamp, p));
}

}  // namespace

CoinProblem coins_generate(int n_coins, int flips_per_coin, double prior_alpha,
                           double prior_beta, std::uint64_t seed) {
  if (n_coins < 1) throw InputError("n_coins must be >= 1");
  if (flips_per_coin < 1) throw InputError("flips_per_coin must be >= 1");
  if (!(prior_alpha > 0.0) || !(prior_beta > 0.0)) {
    throw InputError("prior parameters must be positive");
  }

  CoinProblem prob;
  prob.n_coins = n_coins;
  prob.flips_per_coin = flips_per_coin;
  prob.prior_alpha = prior_alpha;
  prob.prior_beta = prior_beta;
  prob.seed = seed;
  prob.true_biases.resize(static_cast<std::size_t>(n_coins));
  prob.heads.resize(static_cast<std::size_t>(n_coins));

  SplitMix64 bias_rng(derive_seed(seed, 1));
  SplitMix64 flip_rng(derive_seed(seed, 2));
  for (int i = 0; i < n_coins; ++i) {
    const double p = clamp_unit(sample_beta(bias_rng, prior_alpha, prior_beta));
    prob.true_biases[static_cast<std::size_t>(i)] = p;
    int h = 0;
    for (int f = 0; f < flips_per_coin; ++f) {
      if (flip_rng.next_unit() < p) ++h;
    }
    prob.heads[static_cast<std::size_t>(i)] = h;
  }
  return prob;
}

CoinConfig coins_config_from_json(const std::string& text) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("coin config JSON: ") + e.what());
  }
  if (!obj.is_object()) throw InputError("coin config JSON: expected an object");
  CoinConfig cfg;
  try {
    cfg.n_coins = obj.value("n_coins", cfg.n_coins);
    cfg.flips_per_coin = obj.value("flips_per_coin", cfg.flips_per_coin);
    cfg.prior_alpha = obj.value("prior_alpha", cfg.prior_alpha);
    cfg.prior_beta = obj.value("prior_beta", cfg.prior_beta);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("coin config JSON: ") + e.what());
  }
  return cfg;
}

std::string coins_to_json(const CoinProblem& prob) {
  nlohmann::json obj;
  obj["version"] = 1;
  obj["n_coins"] = prob.n_coins;
  obj["flips_per_coin"] = prob.flips_per_coin;
  obj["prior_alpha"] = prob.prior_alpha;
  obj["prior_beta"] = prob.prior_beta;
  obj["seed"] = prob.seed;
  obj["true_biases"] = prob.true_biases;
  obj["heads"] = prob.heads;
  return obj.dump();
}

CoinProblem coins_from_json(const std::string& text) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("coin problem JSON: ") + e.what());
  }
  if (!obj.is_object() || obj.value("version", 0) != 1) {
    throw InputError("coin problem JSON: unknown version");
  }
  CoinProblem prob;
  try {
    prob.n_coins = obj.at("n_coins").get<int>();
    prob.flips_per_coin = obj.at("flips_per_coin").get<int>();
    prob.prior_alpha = obj.at("prior_alpha").get<double>();
    prob.prior_beta = obj.at("prior_beta").get<double>();
    prob.seed = obj.at("seed").get<std::uint64_t>();
    prob.true_biases = obj.at("true_biases").get<std::vector<double>>();
    prob.heads = obj.at("heads").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("coin problem JSON: ") + e.what());
  }
  if (prob.true_biases.size() != static_cast<std::size_t>(prob.n_coins) ||
      prob.heads.size() != static_cast<std::size_t>(prob.n_coins)) {
    throw InputError("coin problem JSON: array lengths do not match n_coins");
  }
  for (int h : prob.heads) {
    if (h < 0 || h > prob.flips_per_coin) throw InputError("coin problem JSON: bad head count");
  }
  return prob;
}

CoinModel coins_train(const CoinProblem& prob, const std::vector<double>& lambda) {
  if (lambda.size() != 2) throw InputError("coins_train expects two penalty weights");
  if (!(lambda[0] >= 0.0) || !(lambda[1] >= 0.0)) {
    throw InputError("coin penalty weights must be nonnegative");
  }
  const double denom = prob.flips_per_coin + lambda[0] + lambda[1];
  CoinModel model;
  model.theta.resize(prob.heads.size());
  for (std::size_t i = 0; i < prob.heads.size(); ++i) {
    model.theta[i] = clamp_unit((prob.heads[i] + lambda[0]) / denom);
  }
  return model;
}

std::vector<double> coins_features(const CoinModel& model, std::int64_t n_total_flips) {
  if (n_total_flips < 1) throw InputError("n_total_flips must be >= 1");
  double sum_log = 0.0;
  double sum_log1m = 0.0;
  for (double th : model.theta) {
    sum_log += std::log(th);
    sum_log1m += std::log(1.0 - th);
  }
  const double n = static_cast<double>(n_total_flips);
  return {-sum_log / n, -sum_log1m / n};
}

CoinsLosses coins_losses(const CoinProblem& prob, const CoinModel& model) {
  if (model.theta.size() != prob.heads.size()) {
    throw InputError("model size does not match problem");
  }
  const double m = prob.flips_per_coin;
  const double post_denom = m + prob.prior_alpha + prob.prior_beta;

  double train_sum = 0.0;
  double exact_sum = 0.0;
  double post_sum = 0.0;
  for (std::size_t i = 0; i < model.theta.size(); ++i) {
    const double log_th = std::log(model.theta[i]);
    const double log_1m = std::log(1.0 - model.theta[i]);
    const double h = prob.heads[i];
    train_sum += -h * log_th - (m - h) * log_1m;
    const double p = prob.true_biases[i];
    exact_sum += -p * log_th - (1.0 - p) * log_1m;
    const double p_bar = (h + prob.prior_alpha) / post_denom;
    post_sum += -p_bar * log_th - (1.0 - p_bar) * log_1m;
  }
  const double n = static_cast<double>(prob.total_flips());
  const double n_coins = static_cast<double>(prob.n_coins);
  return {train_sum / n, exact_sum / n_coins, post_sum / n_coins};
}

CoinsOracle::CoinsOracle(std::shared_ptr<const CoinProblem> prob)
    : prob_(std::move(prob)) {
  if (!prob_) throw InputError("null coin problem");
}

ModelRecord CoinsOracle::train(const std::vector<double>& lambda) {
  const CoinModel model = coins_train(*prob_, lambda);
  const CoinsLosses losses = coins_losses(*prob_, model);
  ModelRecord rec;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "coins(%.12g,%.12g)", lambda[0], lambda[1]);
  rec.id = buf;
  rec.v = losses.exact_test;
  rec.l_hat = losses.l_hat;
  rec.q = coins_features(model, prob_->total_flips());
  rec.test_loss = losses.exact_test;
  return rec;
}

CoinsOracle coins_oracle(std::shared_ptr<const CoinProblem> prob) {
  return CoinsOracle(std::move(prob));
}

}  // namespace linreg
