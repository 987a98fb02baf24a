#pragma once

#include <string>
#include <vector>

namespace adbn::cli {

/// Runs one CLI invocation (argv without the program name). Exit codes:
/// 0 success, 1 validation/evidence/engine errors, 2 usage errors.
int run(const std::vector<std::string>& args);

}  // namespace adbn::cli
