#include <string>
#include <vector>

#include "rawsynth/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rawsynth::cli::run(args);
}
