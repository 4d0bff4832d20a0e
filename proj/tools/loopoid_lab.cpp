#include <iostream>
#include <string>
#include <vector>

#include "loopoid/cli.hpp"

int main(int argc, char** argv) {
  return loopoid::run_command(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
