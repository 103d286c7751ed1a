#include <iostream>

#include "curvereg/cli.hpp"

int main(int argc, char** argv) {
  return curvereg::cli::run(argc, argv, std::cout, std::cerr);
}
