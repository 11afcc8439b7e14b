#include <iostream>

#include "dsn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dsn::run(args, std::cout, std::cerr);
}
