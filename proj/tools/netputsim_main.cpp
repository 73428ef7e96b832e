#include <iostream>
#include <string>
#include <vector>

#include "netputsim/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return netputsim::run_cli(args, std::cout, std::cerr);
}
