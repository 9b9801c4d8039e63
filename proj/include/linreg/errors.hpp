#pragma once

#include <stdexcept>
#include <string>

namespace linreg {

// Malformed caller input: dimension mismatches, invalid parameter ranges,
// unparseable files. Distinct from numerical trouble inside an algorithm.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An algorithm gave up for numerical reasons (e.g. simplex iteration cap).
// Never reported as an ordinary result.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A training run produced non-finite losses or otherwise failed.
class TrainingFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every candidate selection LP was infeasible.
class NoFeasibleRegularizer : public std::runtime_error {
 public:
  NoFeasibleRegularizer()
      : std::runtime_error("no candidate record admits a feasible bound") {}
};

}  // namespace linreg
