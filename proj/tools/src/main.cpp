#include <iostream>
#include <string>
#include <vector>

#include "tempcorr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return tempcorr::cli::run(args, std::cout, std::cerr);
}
