#include <iostream>

#include "adjsim/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return adjsim::cli::main(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
