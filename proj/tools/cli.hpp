#pragma once

#include <ostream>

namespace cluster_bifurc::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3, kVerifyFailed = 4 };

/// Entry point of `cluster-bifurc`; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cluster_bifurc::cli
