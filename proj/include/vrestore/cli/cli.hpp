#pragma once

#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

namespace vrestore {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitWarning = 4;  // restore finished with subtasks left

int exit_code_for(const std::exception& e);

// Runs one command line (args excludes the program name). Diagnostics go to
// err as a single line; results go to out or to the files named by flags.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vrestore
