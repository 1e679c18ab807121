#include <vector>

#include "slope/cli.hpp"

int main(int argc, char** argv) {
  return slope::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
