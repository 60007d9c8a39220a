// Command-line driver, callable in-process for testing. Exit codes: 0 all
// requested checks pass, 1 a property fails, 2 input or usage error, 3 an
// internal invariant was violated.
#ifndef GAMECHECK_CLI_COMMANDS_H_
#define GAMECHECK_CLI_COMMANDS_H_

#include <ostream>
#include <string>
#include <vector>

namespace gamecheck {

int GamecheckMain(std::vector<std::string> args, std::ostream& out,
                  std::ostream& err);

}  // namespace gamecheck

#endif  // GAMECHECK_CLI_COMMANDS_H_
