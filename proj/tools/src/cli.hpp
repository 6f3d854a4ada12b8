#pragma once

#include <iosfwd>

namespace eqrobust::cli {

/// Exit codes of the command-line tool.
enum Exit : int {
  ok = 0,
  io_error = 1,
  degenerate = 2,
  validation = 3,
  fixture_failure = 4,
};

/// Runs one command line. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eqrobust::cli
