#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace diffgal {

// Runs one subcommand; args exclude the program name. Returns the exit code:
// 0 ok, 1 violation or counterexample, 2 parse error or unsupported input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace diffgal
