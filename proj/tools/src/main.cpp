#include <iostream>

#include "qpinem_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qpinem::cli::run(args, std::cout, std::cerr);
}
