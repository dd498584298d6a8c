#include <iostream>
#include <string>
#include <vector>

#include "mvpde/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return mvpde::run_cli(args, std::cout, std::cerr);
}
