#pragma once

#include <ostream>

namespace wsp {

/// Exit codes of the command-line front end.
enum ExitCode {
  exit_ok = 0,
  exit_config = 1,     ///< unreadable config or bad usage
  exit_hypothesis = 2, ///< the engine rejected the problem
  exit_quadrature = 3, ///< the oracle did not converge
  exit_study_rows = 4, ///< some study rows failed
};

/// Entry point of the `wsphase` tool, with its streams injectable for
/// in-process tests.
int run_cli(int argc, const char *const *argv, std::ostream &out,
            std::ostream &err);

} // namespace wsp
