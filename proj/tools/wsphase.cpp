#include <iostream>

#include "wsp/commands.hpp"

int main(int argc, char **argv) {
  return wsp::run_cli(argc, argv, std::cout, std::cerr);
}
