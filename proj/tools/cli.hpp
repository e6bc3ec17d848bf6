#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trickle::cli {

enum ExitCode : int {
  ok = 0,
  unexpected = 1,
  bad_flags = 2,
  engine_failure = 3,
  io_failure = 4,
};

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trickle::cli
