#include <string>
#include <vector>

#include "linreg/cli_app.hpp"

int main(int argc, char** argv) {
  return linreg::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
