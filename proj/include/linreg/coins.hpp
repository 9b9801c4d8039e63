#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "linreg/records.hpp"
#include "linreg/tune_reg.hpp"

namespace linreg {

// Bias estimation for a collection of coins: coin i comes up heads with an
// unknown probability drawn from Beta(prior_alpha, prior_beta), and we
// observe flips_per_coin flips of each. Because the true biases are known,
// test loss is computable exactly, which makes this the benchmark where
// every answer has a closed form.
struct CoinProblem {
  int n_coins = 0;
  int flips_per_coin = 0;
  double prior_alpha = 1.0;
  double prior_beta = 1.0;
  std::uint64_t seed = 0;
  std::vector<double> true_biases;  // strictly inside (0, 1)
  std::vector<int> heads;           // 0..flips_per_coin

  std::int64_t total_flips() const {
    return static_cast<std::int64_t>(n_coins) * flips_per_coin;
  }
};

// Per-coin estimates, clamped to [1e-12, 1 - 1e-12] so log losses stay finite.
struct CoinModel {
  std::vector<double> theta;
};

inline constexpr double kThetaClamp = 1e-12;

CoinProblem coins_generate(int n_coins, int flips_per_coin, double prior_alpha,
                           double prior_beta, std::uint64_t seed);

struct CoinConfig {
  int n_coins = 100000;
  int flips_per_coin = 1;
  double prior_alpha = 1.0;
  double prior_beta = 1.0;
};

// Accepts {"n_coins":..,"flips_per_coin":..,"prior_alpha":..,"prior_beta":..},
// all fields optional.
CoinConfig coins_config_from_json(const std::string& text);

inline CoinProblem coins_generate(const CoinConfig& cfg, std::uint64_t seed) {
  return coins_generate(cfg.n_coins, cfg.flips_per_coin, cfg.prior_alpha,
                        cfg.prior_beta, seed);
}

// Versioned JSON form (biases/heads arrays) for exact cross-machine replay.
std::string coins_to_json(const CoinProblem& prob);
CoinProblem coins_from_json(const std::string& text);

// Closed-form minimizer of l_hat + lambda.q for the two-feature penalty
// below: theta_i = (heads_i + lambda_1) / (flips + lambda_1 + lambda_2).
// Requires lambda >= 0 (the penalized loss is unbounded below otherwise).
CoinModel coins_train(const CoinProblem& prob, const std::vector<double>& lambda);

// Feature vector ( -(1/n) sum log theta_i, -(1/n) sum log(1 - theta_i) )
// with n = total flip count.
std::vector<double> coins_features(const CoinModel& model, std::int64_t n_total_flips);

struct CoinsLosses {
  double l_hat = 0.0;                   // average log loss on the observed flips
  double exact_test = 0.0;              // expected log loss under the true biases
  double posterior_expected_test = 0.0; // same with posterior-mean biases
};

CoinsLosses coins_losses(const CoinProblem& prob, const CoinModel& model);

// k=2 oracle over the problem: v and test_loss are the exact test loss.
class CoinsOracle final : public TrainingOracle {
 public:
  explicit CoinsOracle(std::shared_ptr<const CoinProblem> prob);

  std::size_t feature_dim() const override { return 2; }
  ModelRecord train(const std::vector<double>& lambda) override;

 private:
  std::shared_ptr<const CoinProblem> prob_;
};

CoinsOracle coins_oracle(std::shared_ptr<const CoinProblem> prob);

}  // namespace linreg
