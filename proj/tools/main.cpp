#include <iostream>

#include "diffgal/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return diffgal::run_cli(args, std::cout, std::cerr);
}
