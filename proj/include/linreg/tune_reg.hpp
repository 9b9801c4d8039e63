#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "linreg/records.hpp"
#include "linreg/rng.hpp"

namespace linreg {

// A training backend: maps a hyperparameter vector to a trained model's
// record. Implementations must be deterministic given (lambda, problem seed).
class TrainingOracle {
 public:
  virtual ~TrainingOracle() = default;
  virtual std::size_t feature_dim() const = 0;
  virtual ModelRecord train(const std::vector<double>& lambda) = 0;
};

enum class Scale { kUniform, kLogUniform };

struct SamplerDim {
  double low = 0.0;
  double high = 1.0;
  Scale scale = Scale::kUniform;
};

struct SamplerSpec {
  std::vector<SamplerDim> dims;

  std::size_t dim() const { return dims.size(); }
  BoxConstraint as_box() const;
  bool contains(const std::vector<double>& lambda) const;
};

// Maps unit-interval draws through the spec: uniform dims interpolate
// linearly, log-uniform dims interpolate in log space.
std::vector<double> sample_from_unit(const SamplerSpec& spec,
                                     const std::vector<double>& unit);

std::vector<double> random_sample(const SamplerSpec& spec, SplitMix64& rng);

// Membership up to relative L-inf distance; coordinates below 1e-12 in
// magnitude are compared absolutely instead.
bool is_seen(const std::vector<double>& lambda,
             const std::vector<std::vector<double>>& seen, double tol_rel);

inline constexpr double kSeenTolRel = 1e-9;

enum class ProposalSource { kInitial, kLp, kRandomFallback };

const char* to_string(ProposalSource source);

struct TuneEntry {
  std::size_t step = 0;  // 1-based
  std::vector<double> lambda;
  ModelRecord record;
  ProposalSource source = ProposalSource::kInitial;
  double best_v = 0.0;  // running min of v over steps 1..step
};

struct TuneHistory {
  std::vector<TuneEntry> entries;
};

// A training call threw: carries whatever history was accumulated so callers
// can flush partial results.
class OracleFailure : public std::runtime_error {
 public:
  OracleFailure(const std::string& what, TuneHistory partial)
      : std::runtime_error(what), partial_history(std::move(partial)) {}
  TuneHistory partial_history;
};

// Iterative tuning: trains each initial lambda, then repeatedly fits the
// selection LP on everything seen so far and trains at the proposed lambda,
// falling back to a fresh random sample when the proposal was already seen
// or the fit fails. By default LP proposals are accepted wherever they land;
// passing a box constrains the LP and additionally falls back to a random
// sample when a proposal leaves the sampler's hypercube. Runs until exactly
// `budget` models have been trained.
TuneHistory tune(TrainingOracle& oracle,
                 const std::vector<std::vector<double>>& initial,
                 const SamplerSpec& spec, std::size_t budget,
                 const std::optional<BoxConstraint>& box, const RngStream& rng);

// Baseline: budget independent draws, each trained and logged.
TuneHistory random_search(TrainingOracle& oracle, const SamplerSpec& spec,
                          std::size_t budget, const RngStream& rng);

// CSV block: run_id, step, source, lambda_0..lambda_{k-1}, v, l_hat,
// test_loss, best_v. Header is written only when with_header is set, so
// multi-run files can share one.
void write_history_csv(const TuneHistory& history, std::size_t run_id,
                       std::size_t k, bool with_header, std::ostream& out);

}  // namespace linreg
