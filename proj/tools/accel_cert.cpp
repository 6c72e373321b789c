#include <iostream>
#include <string>
#include <vector>

#include "accel/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return accel::cli::run(args, std::cout, std::cerr);
}
