#include <iostream>

#include "cascade_pricer/cli.hpp"

int main(int argc, char** argv) {
  return cascade_pricer::cli::run_cli(argc, argv, std::cout, std::cerr);
}
