#include <iostream>
#include <string>
#include <vector>

#include "spectrace/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return spectrace::cli::run(args, std::cout, std::cerr);
}
