#include <iostream>

#include "chunkwise/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return chunkwise::run(args, std::cout, std::cerr);
}
