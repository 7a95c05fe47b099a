#include <iostream>
#include <string>
#include <vector>

#include "ising_ldpc/cli_app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ildpc::run_cli(args, std::cout, std::cerr);
}
