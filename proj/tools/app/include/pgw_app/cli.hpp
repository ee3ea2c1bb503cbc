#pragma once

#include <iosfwd>

namespace pgw::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitConvergence = 3;

/// Environment variable holding the default worker-thread count.
inline constexpr const char* kThreadsEnv = "PGW_THREADS";

/// Runs the `pgw` command line. Results go to `out` unless --out names a file;
/// diagnostics go to `err`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pgw::app
