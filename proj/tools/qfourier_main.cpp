#include <iostream>
#include <string>
#include <vector>

#include "qfourier/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return qfourier::run_command(args, std::cout, std::cerr);
}
