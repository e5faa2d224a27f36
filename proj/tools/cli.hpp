#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lcctool {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,  // validation failed or an internal check fired
  kExitInput = 2,       // I/O, parse, version or structural error
  kExitBudget = 3,      // a search, generator or contraction ran out of budget
  kExitPrecondition = 4,
};

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Help text of every command, with the long flags it must document.
struct HelpEntry {
  std::string path;  // "gen hadamard", "" for the top level
  std::string help;
  std::vector<std::string> flags;
};

std::vector<HelpEntry> help_entries();

}  // namespace lcctool
