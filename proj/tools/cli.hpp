#pragma once

#include <ostream>

namespace curvlab::cli {

/// Exit codes: 0 all checks Pass/EqualityDetected, 1 any Fail, violated
/// hypothesis or numerical failure, 2 usage or input error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace curvlab::cli
