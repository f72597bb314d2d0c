#include <iostream>
#include <string>
#include <vector>

#include "puckpar/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return puckpar::cli::run(args, std::cout, std::cerr);
}
