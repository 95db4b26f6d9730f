#include <iostream>
#include <string>
#include <vector>

#include "phasemod/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return phasemod::cli::run_main(args, std::cout, std::cerr);
}
