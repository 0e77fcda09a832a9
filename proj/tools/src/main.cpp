#include <iostream>

#include "advisor/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return advisor::cli::run_cli(args, std::cout, std::cerr, std::cin);
}
