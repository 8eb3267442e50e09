#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  degldp::acceptance::Options opts;
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--full") {
      opts.quick = false;
    } else if (arg == "--seed" && i + 1 < argc) {
      opts.seed = std::stoull(argv[++i]);
    } else {
      only.push_back(std::stoi(arg));
    }
  }
  return degldp::acceptance::run_all(opts, std::cout, only) ? EXIT_SUCCESS
                                                            : EXIT_FAILURE;
}
