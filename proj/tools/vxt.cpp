#include <iostream>

#include "vxt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return vxt::cli::run_command(args, std::cin, std::cout, std::cerr);
}
