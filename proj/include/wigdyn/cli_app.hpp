#ifndef WIGDYN_CLI_APP_HPP
#define WIGDYN_CLI_APP_HPP

#include <string>
#include <vector>

namespace wigdyn::cli {

// Exit codes: 0 computed (any verdict), 2 validation error,
// 3 numerical-guard error, 4 I/O error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumericalGuard = 3;
inline constexpr int kExitIo = 4;

/// Runs the wigdyn CLI on an argv-style argument list (program name not
/// included). Used by main() and driven in-process by the tests.
int run(const std::vector<std::string>& args);

}  // namespace wigdyn::cli

#endif
