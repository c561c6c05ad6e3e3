#include <iostream>

#include "jbjump/cli.hpp"

int main(int argc, char** argv) {
  return jbjump::cli::main(argc, argv, std::cout, std::cerr);
}
