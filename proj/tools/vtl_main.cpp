#include <iostream>
#include <string>
#include <vector>

#include "vtl/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    std::cout << "usage: vtl <growth|ball|transport|verify|profile> [--config file] [--key value ...]\n"
                 "keys: group matrix gens rmax radius fit-lo fit-hi family n-lo n-hi seed max-mult mass\n"
                 "      count cap work-limit domain out cache\n";
    return args.empty() ? 2 : 0;
  }
  return vtl::cli::run(args, std::cout, std::cerr);
}
