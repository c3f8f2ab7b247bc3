#include <iostream>
#include <string>
#include <vector>

#include "heatlab/cli.hpp"

int main(int argc, char** argv) {
  return heatlab::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
