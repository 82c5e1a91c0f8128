#include <iostream>

#include "harness/commands.hpp"

int main(int argc, char** argv) {
  return fxlt::harness::runCli(argc, argv, std::cout, std::cerr);
}
