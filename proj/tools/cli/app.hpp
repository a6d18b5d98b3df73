#pragma once

namespace owg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalidArgs = 2;
inline constexpr int kExitNonConvergence = 3;

/// Parses the command line, runs one subcommand and maps errors to exit codes:
/// 0 success, 2 invalid arguments or unreadable inputs, 3 non-convergence,
/// 1 anything else. Diagnostics go to stderr.
int run(int argc, const char* const* argv);

}  // namespace owg::cli
