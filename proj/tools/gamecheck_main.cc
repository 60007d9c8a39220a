#include <iostream>
#include <string>
#include <vector>

#include "gamecheck/cli_commands.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gamecheck::GamecheckMain(std::move(args), std::cout, std::cerr);
}
