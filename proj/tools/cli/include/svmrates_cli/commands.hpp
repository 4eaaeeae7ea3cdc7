#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "svmrates_cli/config.hpp"

namespace svmrates::cli {

struct RunResult {
  int exit_code = 0;
  // Paths written, data files first.
  std::vector<std::string> files;
};

// Runs the configured subcommand. Output names are <command>_<hash>*.
// Progress and conflicts go to `log`.
RunResult run(const RunConfig& config, std::ostream& log);

}  // namespace svmrates::cli
