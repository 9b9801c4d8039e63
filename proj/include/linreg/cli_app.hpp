#pragma once

#include <string>
#include <vector>

namespace linreg::cli {

// Runs the command-line tool. Exit codes: 0 success, 1 input error,
// 2 no feasible bound, 3 training failure (partial output is flushed).
int run(const std::vector<std::string>& args);

}  // namespace linreg::cli
