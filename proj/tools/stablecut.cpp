#include "stablecut/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return stablecut::cli::run(args, std::cout, std::cerr);
}
