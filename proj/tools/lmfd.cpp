#include <iostream>

#include "lmfd/cli.hpp"

int main(int argc, char** argv) {
  return lmfd::cli::run(argc, argv, std::cout, std::cerr);
}
