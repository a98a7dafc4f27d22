#include <vector>

#include "tangle/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tangle::cli_main(args);
}
