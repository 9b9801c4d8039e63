#include "linreg/tune_reg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "linreg/errors.hpp"
#include "linreg/learn_lin_reg.hpp"

namespace linreg {
namespace {

void validate_spec(const SamplerSpec& spec) {
  if (spec.dims.empty()) throw InputError("sampler spec has no dimensions");
  for (std::size_t j = 0; j < spec.dims.size(); ++j) {
    const SamplerDim& d = spec.dims[j];
    if (!std::isfinite(d.low) || !std::isfinite(d.high) || !(d.low < d.high)) {
      throw InputError("sampler dimension " + std::to_string(j) +
                       " must satisfy low < high with finite bounds");
    }
    if (d.scale == Scale::kLogUniform && d.low <= 0.0) {
      throw InputError("log-uniform sampler dimension " + std::to_string(j) +
                       " requires low > 0");
    }
  }
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

ModelRecord train_or_fail(TrainingOracle& oracle, const std::vector<double>& lambda,
                          const TuneHistory& history) {
  try {
    return oracle.train(lambda);
  } catch (const std::exception& e) {
    throw OracleFailure(std::string("training failed: ") + e.what(), history);
  }
}

void append_entry(TuneHistory& history, std::vector<double> lambda, ModelRecord record,
                  ProposalSource source) {
  TuneEntry entry;
  entry.step = history.entries.size() + 1;
  entry.lambda = std::move(lambda);
  entry.best_v = history.entries.empty() ? record.v
                                         : std::min(history.entries.back().best_v, record.v);
  entry.record = std::move(record);
  entry.source = source;
  history.entries.push_back(std::move(entry));
}

}  // namespace

BoxConstraint SamplerSpec::as_box() const {
  BoxConstraint box;
  for (const SamplerDim& d : dims) {
    box.lambda_min.push_back(d.low);
    box.lambda_max.push_back(d.high);
  }
  return box;
}

bool SamplerSpec::contains(const std::vector<double>& lambda) const {
  if (lambda.size() != dims.size()) return false;
  for (std::size_t j = 0; j < dims.size(); ++j) {
    if (lambda[j] < dims[j].low || lambda[j] > dims[j].high) return false;
  }
  return true;
}

std::vector<double> sample_from_unit(const SamplerSpec& spec,
                                     const std::vector<double>& unit) {
  validate_spec(spec);
  if (unit.size() != spec.dims.size()) throw InputError("unit draw dimension mismatch");
  std::vector<double> out(unit.size());
  for (std::size_t j = 0; j < unit.size(); ++j) {
    const SamplerDim& d = spec.dims[j];
    const double u = unit[j];
    if (d.scale == Scale::kUniform) {
      out[j] = d.low + u * (d.high - d.low);
    } else {
      out[j] = std::exp(std::log(d.low) + u * (std::log(d.high) - std::log(d.low)));
    }
  }
  return out;
}

std::vector<double> random_sample(const SamplerSpec& spec, SplitMix64& rng) {
  validate_spec(spec);
  std::vector<double> unit(spec.dims.size());
  for (double& u : unit) u = rng.next_unit();
  return sample_from_unit(spec, unit);
}

bool is_seen(const std::vector<double>& lambda,
             const std::vector<std::vector<double>>& seen, double tol_rel) {
  for (const std::vector<double>& other : seen) {
    if (other.size() != lambda.size()) {
      throw InputError("seen-set member dimension mismatch");
    }
    double dist = 0.0;
    for (std::size_t j = 0; j < lambda.size(); ++j) {
      const double denom = std::max(std::fabs(lambda[j]), std::fabs(other[j]));
      const double diff = std::fabs(lambda[j] - other[j]);
      dist = std::max(dist, denom < 1e-12 ? diff : diff / denom);
    }
    if (dist <= tol_rel) return true;
  }
  return false;
}

const char* to_string(ProposalSource source) {
  switch (source) {
    case ProposalSource::kInitial: return "initial";
    case ProposalSource::kLp: return "lp";
    case ProposalSource::kRandomFallback: return "random_fallback";
  }
  return "?";
}

TuneHistory tune(TrainingOracle& oracle,
                 const std::vector<std::vector<double>>& initial,
                 const SamplerSpec& spec, std::size_t budget,
                 const std::optional<BoxConstraint>& box, const RngStream& rng) {
  validate_spec(spec);
  const std::size_t k = oracle.feature_dim();
  if (spec.dim() != k) throw InputError("sampler spec dimension does not match oracle");
  if (initial.empty()) throw InputError("need at least one initial hyperparameter vector");
  if (budget < initial.size()) throw InputError("budget smaller than the initial set");
  for (const auto& lam : initial) {
    if (lam.size() != k) throw InputError("initial lambda dimension mismatch");
  }

  TuneHistory history;
  std::vector<std::vector<double>> seen;
  std::vector<ModelRecord> dataset;

  for (const auto& lam : initial) {
    ModelRecord rec = train_or_fail(oracle, lam, history);
    dataset.push_back(rec);
    append_entry(history, lam, std::move(rec), ProposalSource::kInitial);
    seen.push_back(lam);
  }

  while (history.entries.size() < budget) {
    const std::size_t step = history.entries.size() + 1;
    std::vector<double> lambda;
    ProposalSource source = ProposalSource::kLp;
    try {
      LearnResult fit = learn_lin_reg(dataset, box);  // alpha is discarded here
      lambda = std::move(fit.weights.lambda);
    } catch (const NoFeasibleRegularizer&) {
      source = ProposalSource::kRandomFallback;
    } catch (const NumericalFailure&) {
      source = ProposalSource::kRandomFallback;
    }
    if (source == ProposalSource::kLp && is_seen(lambda, seen, kSeenTolRel)) {
      source = ProposalSource::kRandomFallback;
    }
    if (source == ProposalSource::kLp && box.has_value() && !spec.contains(lambda)) {
      source = ProposalSource::kRandomFallback;
    }
    if (source == ProposalSource::kRandomFallback) {
      SplitMix64 step_rng = rng.at(step);
      lambda = random_sample(spec, step_rng);
    }

    ModelRecord rec = train_or_fail(oracle, lambda, history);
    dataset.push_back(rec);
    seen.push_back(lambda);
    append_entry(history, std::move(lambda), std::move(rec), source);
  }
  return history;
}

TuneHistory random_search(TrainingOracle& oracle, const SamplerSpec& spec,
                          std::size_t budget, const RngStream& rng) {
  validate_spec(spec);
  if (spec.dim() != oracle.feature_dim()) {
    throw InputError("sampler spec dimension does not match oracle");
  }
  TuneHistory history;
  for (std::size_t step = 1; step <= budget; ++step) {
    SplitMix64 step_rng = rng.at(step);
    std::vector<double> lambda = random_sample(spec, step_rng);
    ModelRecord rec = train_or_fail(oracle, lambda, history);
    append_entry(history, std::move(lambda), std::move(rec), ProposalSource::kRandomFallback);
  }
  return history;
}

void write_history_csv(const TuneHistory& history, std::size_t run_id,
                       std::size_t k, bool with_header, std::ostream& out) {
  if (with_header) {
    out << "run_id,step,source";
    for (std::size_t j = 0; j < k; ++j) out << ",lambda_" << j;
    out << ",v,l_hat,test_loss,best_v\n";
  }
  for (const TuneEntry& e : history.entries) {
    out << run_id << ',' << e.step << ',' << to_string(e.source);
    for (std::size_t j = 0; j < k; ++j) out << ',' << format_double(e.lambda[j]);
    out << ',' << format_double(e.record.v) << ',' << format_double(e.record.l_hat) << ',';
    if (e.record.test_loss) out << format_double(*e.record.test_loss);
    out << ',' << format_double(e.best_v) << '\n';
  }
}

}  // namespace linreg
