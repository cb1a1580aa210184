#include <iostream>
#include <string>
#include <vector>

#include "curvemates/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return curvemates::run_cli(args, std::cout, std::cerr);
}
