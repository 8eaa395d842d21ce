#include <iostream>
#include <string>
#include <vector>

#include "arc/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return arc::cli::run(args, std::cout, std::cerr);
}
